#include "wfsat/decide.hpp"

#include "wfsat/error.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <stdexcept>
#include <thread>

namespace wfsat {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void require_budget(const Rational& budget)
{
    if (budget < 0) {
        throw std::invalid_argument("budget must be non-negative");
    }
}

void require_probability(const Rational& p)
{
    if (p < 0 || p > 1) {
        throw std::invalid_argument("probability must lie in [0, 1]");
    }
}

} // namespace

Analysis analyze(const Schema& schema, unsigned jobs)
{
    Analysis out;
    const auto start = std::chrono::steady_clock::now();
    out.instances = eliminate_xor(schema.workflow, schema.elements);
    for (std::size_t i = 0; i < out.instances.size(); ++i) {
        for (auto& a : enumerate_arrangements(out.instances[i], schema.elements, i)) {
            out.records.push_back(ArrangementRecord{std::move(a), 0, {}});
        }
    }
    out.enumerate_seconds = seconds_since(start);

    const auto solve_start = std::chrono::steady_clock::now();
    SolveCache cache;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < out.records.size(); i = next++) {
            auto& rec = out.records[i];
            rec.count = count_sequences(rec.arrangement, out.instances[rec.arrangement.instance]);
            rec.best = min_cost_arrangement(rec.arrangement, schema, &cache);
        }
    };
    if (jobs == 0) {
        jobs = std::max(1u, std::thread::hardware_concurrency());
    }
    const std::size_t threads = std::min<std::size_t>(jobs, out.records.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    out.solve_seconds = seconds_since(solve_start);

    out.total_sequences = 0;
    for (const auto& rec : out.records) {
        out.total_sequences += rec.count;
    }
    return out;
}

std::int64_t max_cost(const Analysis& analysis)
{
    std::int64_t best = 0;
    for (const auto& rec : analysis.records) {
        best = std::max(best, rec.best.total);
    }
    return best;
}

Rational expected_cost(const Analysis& analysis)
{
    if (analysis.total_sequences == 0) {
        return 0;
    }
    BigInt weighted = 0;
    for (const auto& rec : analysis.records) {
        weighted += rec.count * rec.best.total;
    }
    return Rational(weighted, analysis.total_sequences);
}

BigInt within_budget(const Analysis& analysis, const Rational& budget)
{
    BigInt b = 0;
    for (const auto& rec : analysis.records) {
        if (Rational(rec.best.total) <= budget) {
            b += rec.count;
        }
    }
    return b;
}

void require_positive_weights(const Schema& schema)
{
    for (const auto& c : schema.constraints) {
        if (c.weight <= 0) {
            throw ZeroWeight("constraint '" + c.id + "' has weight 0");
        }
    }
    for_each_bit(schema.steps(), [&](ElementIndex s) {
        bool restricted = false;
        for (UserIndex u = 0; u < schema.users.size(); ++u) {
            restricted = restricted || !schema.is_authorized(s, u);
        }
        if (restricted && schema.penalty(s) <= 0) {
            throw ZeroWeight("step '" + schema.elements.ids[s] + "' has unauthorized penalty 0");
        }
    });
}

StrongSatResult check_strong_sat(const Schema& schema, const Analysis& analysis)
{
    require_positive_weights(schema);
    StrongSatResult out;
    for (std::size_t i = 0; i < analysis.records.size(); ++i) {
        if (analysis.records[i].best.total != 0) {
            out.failing_record = i;
            return out;
        }
    }
    out.satisfiable = true;
    return out;
}

StrongSatResult check_strong_sat(const Schema& schema, unsigned jobs)
{
    require_positive_weights(schema);
    return check_strong_sat(schema, analyze(schema, jobs));
}

bool check_bounded_cost(const Analysis& analysis, const Rational& budget)
{
    require_budget(budget);
    return Rational(max_cost(analysis)) <= budget;
}

bool check_expected_cost(const Analysis& analysis, const Rational& budget)
{
    require_budget(budget);
    BigInt weighted = 0;
    for (const auto& rec : analysis.records) {
        weighted += rec.count * rec.best.total;
    }
    return Rational(weighted) <= budget * Rational(analysis.total_sequences);
}

bool check_approx(const Analysis& analysis, const Rational& budget, const Rational& probability)
{
    require_budget(budget);
    require_probability(probability);
    return Rational(within_budget(analysis, budget)) >= probability * Rational(analysis.total_sequences);
}

bool check_bounded_cost(const Schema& schema, const Rational& budget, unsigned jobs)
{
    require_budget(budget);
    return check_bounded_cost(analyze(schema, jobs), budget);
}

bool check_expected_cost(const Schema& schema, const Rational& budget, unsigned jobs)
{
    require_budget(budget);
    return check_expected_cost(analyze(schema, jobs), budget);
}

bool check_approx(const Schema& schema, const Rational& budget, const Rational& probability, unsigned jobs)
{
    require_budget(budget);
    require_probability(probability);
    return check_approx(analyze(schema, jobs), budget, probability);
}

Rational min_budget_bounded(const Analysis& analysis)
{
    return Rational(max_cost(analysis));
}

Rational min_budget_expected(const Analysis& analysis)
{
    return expected_cost(analysis);
}

std::string_view to_string(Problem problem) noexcept
{
    switch (problem) {
    case Problem::strong:
        return "strong";
    case Problem::bounded:
        return "bounded";
    case Problem::expected:
        return "expected";
    case Problem::approx:
        return "approx";
    case Problem::solve:
        return "solve";
    case Problem::min_budget_bounded:
        return "min-budget-bounded";
    case Problem::min_budget_expected:
        return "min-budget-expected";
    }
    return "?";
}

DecisionReport decide(const Schema& schema, Problem problem, std::optional<Rational> budget,
                      std::optional<Rational> probability, unsigned jobs)
{
    DecisionReport r;
    r.problem = problem;
    r.budget = budget ? budget : schema.budget;
    r.probability = probability ? probability : schema.probability;

    const bool needs_budget = problem == Problem::bounded || problem == Problem::expected || problem == Problem::approx;
    if (needs_budget && !r.budget) {
        throw std::invalid_argument(std::string(to_string(problem)) + " needs a budget");
    }
    if (problem == Problem::approx && !r.probability) {
        throw std::invalid_argument("approx needs a probability");
    }
    if (r.budget) {
        require_budget(*r.budget);
    }
    if (r.probability) {
        require_probability(*r.probability);
    }
    if (problem == Problem::strong) {
        require_positive_weights(schema);
    }

    r.analysis = analyze(schema, jobs);
    r.max_cost = max_cost(r.analysis);
    r.expected_cost = expected_cost(r.analysis);
    if (r.budget) {
        r.within_budget = within_budget(r.analysis, *r.budget);
    }

    switch (problem) {
    case Problem::strong: {
        const auto s = check_strong_sat(schema, r.analysis);
        r.answer = s.satisfiable;
        r.failing_record = s.failing_record;
        break;
    }
    case Problem::bounded:
        r.answer = check_bounded_cost(r.analysis, *r.budget);
        break;
    case Problem::expected:
        r.answer = check_expected_cost(r.analysis, *r.budget);
        break;
    case Problem::approx:
        r.answer = check_approx(r.analysis, *r.budget, *r.probability);
        break;
    case Problem::min_budget_bounded:
        r.min_budget = min_budget_bounded(r.analysis);
        break;
    case Problem::min_budget_expected:
        r.min_budget = min_budget_expected(r.analysis);
        break;
    case Problem::solve:
        break;
    }
    return r;
}

} // namespace wfsat
