#include "wfsat/oracle.hpp"

#include "wfsat/error.hpp"

#include <algorithm>
#include <map>

namespace wfsat::oracle {

namespace {

void shuffle(const Sequence& a, std::size_t i, const Sequence& b, std::size_t j, Sequence& acc,
             std::vector<Sequence>& out)
{
    if (i == a.size() && j == b.size()) {
        out.push_back(acc);
        return;
    }
    if (i < a.size()) {
        acc.push_back(a[i]);
        shuffle(a, i + 1, b, j, acc, out);
        acc.pop_back();
    }
    if (j < b.size()) {
        acc.push_back(b[j]);
        shuffle(a, i, b, j + 1, acc, out);
        acc.pop_back();
    }
}

std::vector<Sequence> sigma(const CompositionNode& node, const ElementTable& table, std::size_t limit)
{
    if (node.is_leaf()) {
        return {Sequence{*table.find(node.id())}};
    }
    auto lhs = sigma(*node.left(), table, limit);
    auto rhs = sigma(*node.right(), table, limit);
    std::vector<Sequence> out;
    if (node.kind() == NodeKind::choice) {
        out = std::move(lhs);
        out.insert(out.end(), rhs.begin(), rhs.end());
    } else {
        for (const auto& a : lhs) {
            for (const auto& b : rhs) {
                if (node.kind() == NodeKind::seq) {
                    Sequence s = a;
                    s.insert(s.end(), b.begin(), b.end());
                    out.push_back(std::move(s));
                } else {
                    Sequence acc;
                    shuffle(a, 0, b, 0, acc, out);
                }
                if (out.size() > limit) {
                    throw SizeLimit("oracle: more than " + std::to_string(limit) + " sequences");
                }
            }
        }
    }
    if (out.size() > limit) {
        throw SizeLimit("oracle: more than " + std::to_string(limit) + " sequences");
    }
    return out;
}

std::size_t full_violation(const WeightedConstraint& c, const std::vector<UserIndex>& values)
{
    std::vector<UserIndex> distinct = values;
    std::sort(distinct.begin(), distinct.end());
    const auto d = static_cast<std::size_t>(std::unique(distinct.begin(), distinct.end()) - distinct.begin());
    switch (c.kind) {
    case ConstraintKind::sod:
        return values[0] == values[1] ? 1 : 0;
    case ConstraintKind::bod:
        return values[0] != values[1] ? 1 : 0;
    case ConstraintKind::at_most:
        return d > c.k ? d - c.k : 0;
    case ConstraintKind::at_least:
        return c.k > d ? c.k - d : 0;
    }
    return 0;
}

// Subscopes of every constraint as read off one sequence.
using Subscopes = std::vector<std::vector<ElementMask>>;

Subscopes subscopes_of(const Sequence& seq, const Schema& schema)
{
    Subscopes out;
    for (const auto& c : schema.constraints) {
        std::vector<ElementMask> regions{0};
        for (ElementIndex e : seq) {
            if (contains(c.release, e)) {
                regions.push_back(0);
            } else if (contains(c.scope, e)) {
                regions.back() |= bit(e);
            }
        }
        out.push_back(std::move(regions));
    }
    return out;
}

class Evaluator {
public:
    explicit Evaluator(const Schema& schema) : schema_(schema) {}

    // Smallest violation of constraint `ci` over all extensions of the
    // values fixed on `part` to the whole scope.
    std::size_t extension_min(std::size_t ci, ElementMask part, const std::vector<UserIndex>& fixed)
    {
        auto key = std::make_tuple(ci, part, fixed);
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        const auto& c = schema_.constraints[ci];
        const auto scope = indices_of(c.scope);
        std::vector<std::size_t> free_pos;
        std::vector<UserIndex> values(scope.size(), 0);
        std::size_t next_fixed = 0;
        for (std::size_t i = 0; i < scope.size(); ++i) {
            if (contains(part, scope[i])) {
                values[i] = fixed[next_fixed++];
            } else {
                free_pos.push_back(i);
            }
        }
        const std::size_t users = schema_.users.size();
        std::vector<UserIndex> digits(free_pos.size(), 0);
        std::size_t best = full_violation(c, values);
        // Odometer over the free positions.
        while (best > 0) {
            std::size_t pos = 0;
            while (pos < digits.size() && ++digits[pos] == users) {
                digits[pos] = 0;
                ++pos;
            }
            if (pos == digits.size()) {
                break;
            }
            for (std::size_t i = 0; i < free_pos.size(); ++i) {
                values[free_pos[i]] = digits[i];
            }
            best = std::min(best, full_violation(c, values));
        }
        memo_.emplace(std::move(key), best);
        return best;
    }

    std::int64_t cost(const Subscopes& subs, const std::vector<ElementIndex>& steps,
                      const std::vector<UserIndex>& users_of)
    {
        std::int64_t total = 0;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            if (!schema_.is_authorized(steps[i], users_of[i])) {
                total += schema_.penalty(steps[i]);
            }
        }
        for (std::size_t ci = 0; ci < subs.size(); ++ci) {
            for (ElementMask part : subs[ci]) {
                if (part == 0) {
                    continue;
                }
                std::vector<UserIndex> fixed;
                for (std::size_t i = 0; i < steps.size(); ++i) {
                    if (contains(part, steps[i])) {
                        fixed.push_back(users_of[i]);
                    }
                }
                total += schema_.constraints[ci].weight * static_cast<std::int64_t>(extension_min(ci, part, fixed));
            }
        }
        return total;
    }

    CostedPlan minimum(const Sequence& seq, const Limits& limits)
    {
        std::vector<ElementIndex> steps;
        for (ElementIndex e : seq) {
            if (schema_.elements.is_step(e)) {
                steps.push_back(e);
            }
        }
        std::sort(steps.begin(), steps.end());
        const Subscopes subs = subscopes_of(seq, schema_);

        // The cost function depends on sigma only through its step set and
        // subscopes, so sequences sharing both share the minimum.
        auto key = std::make_pair(subs, steps);
        if (auto it = minima_.find(key); it != minima_.end()) {
            return it->second;
        }

        const std::size_t users = schema_.users.size();
        BigInt space = 1;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            space *= users;
        }
        if (space > limits.plans) {
            throw SizeLimit("oracle: more than " + std::to_string(limits.plans) + " plans per sequence");
        }

        std::vector<UserIndex> plan(steps.size(), 0);
        std::vector<UserIndex> best_plan = plan;
        std::int64_t best = cost(subs, steps, plan);
        // Odometer with the first step most significant: lexicographic order.
        while (best > 0) {
            std::size_t pos = steps.size();
            while (pos > 0 && ++plan[pos - 1] == users) {
                plan[pos - 1] = 0;
                --pos;
            }
            if (pos == 0) {
                break;
            }
            const std::int64_t c = cost(subs, steps, plan);
            if (c < best) {
                best = c;
                best_plan = plan;
            }
        }

        CostedPlan out;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            out.plan.assignment[steps[i]] = best_plan[i];
            if (!schema_.is_authorized(steps[i], best_plan[i])) {
                out.authorization_weight += schema_.penalty(steps[i]);
            }
        }
        out.total = best;
        out.constraint_weight = best - out.authorization_weight;
        minima_.emplace(std::move(key), out);
        return out;
    }

private:
    const Schema& schema_;
    std::map<std::tuple<std::size_t, ElementMask, std::vector<UserIndex>>, std::size_t> memo_;
    std::map<std::pair<Subscopes, std::vector<ElementIndex>>, CostedPlan> minima_;
};

} // namespace

std::vector<Sequence> all_sequences(const CompositionNode& root, const ElementTable& table, std::size_t limit)
{
    auto out = sigma(root, table, limit);
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t plan_cost(const Sequence& seq, const Plan& plan, const Schema& schema)
{
    Evaluator eval(schema);
    std::vector<ElementIndex> steps;
    std::vector<UserIndex> users_of;
    for (ElementIndex e : seq) {
        if (schema.elements.is_step(e)) {
            steps.push_back(e);
            users_of.push_back(plan.assignment.at(e));
        }
    }
    return eval.cost(subscopes_of(seq, schema), steps, users_of);
}

CostedPlan min_cost_sequence(const Sequence& seq, const Schema& schema, const Limits& limits)
{
    Evaluator eval(schema);
    return eval.minimum(seq, limits);
}

Report decide(const Schema& schema, std::optional<Rational> budget, std::optional<Rational> probability,
              const Limits& limits)
{
    Report r;
    r.sequences = all_sequences(*schema.workflow, schema.elements, limits.sequences);
    Evaluator eval(schema);
    const ElementMask releases = schema.releases();

    using ClassKey = std::tuple<Sequence, ElementMask, std::vector<ElementMask>>;
    std::map<ClassKey, std::size_t> class_of;
    BigInt weighted = 0;
    BigInt within = 0;
    r.strong = true;
    for (std::size_t i = 0; i < r.sequences.size(); ++i) {
        const auto& seq = r.sequences[i];
        const std::int64_t m = eval.minimum(seq, limits).total;
        r.minimum.push_back(m);
        r.max_cost = std::max(r.max_cost, m);
        weighted += m;
        r.strong = r.strong && m == 0;
        if (budget && Rational(m) <= *budget) {
            ++within;
        }

        Sequence release_order;
        ElementMask step_set = 0;
        std::vector<ElementMask> right_releases;
        for (std::size_t p = 0; p < seq.size(); ++p) {
            if (contains(releases, seq[p])) {
                release_order.push_back(seq[p]);
                continue;
            }
            step_set |= bit(seq[p]);
        }
        for_each_bit(step_set, [&](ElementIndex s) {
            const auto at = std::find(seq.begin(), seq.end(), s);
            ElementMask after = 0;
            for (auto it = at + 1; it != seq.end(); ++it) {
                if (contains(releases, *it)) {
                    after |= bit(*it);
                }
            }
            right_releases.push_back(after);
        });
        ClassKey key{release_order, step_set, right_releases};
        auto [it, fresh] = class_of.emplace(key, r.classes.size());
        if (fresh) {
            r.classes.push_back(SequenceClass{{}, m});
        }
        auto& cls = r.classes[it->second];
        cls.members.push_back(i);
        cls.min_cost = std::min(cls.min_cost, m);
    }

    r.total = r.sequences.size();
    r.expected_cost = r.total == 0 ? Rational(0) : Rational(weighted, r.total);
    if (budget) {
        r.within_budget = within;
        r.bounded = Rational(r.max_cost) <= *budget;
        r.expected = Rational(weighted) <= *budget * Rational(r.total);
        if (probability) {
            r.approx = Rational(within) >= *probability * Rational(r.total);
        }
    }
    return r;
}

} // namespace wfsat::oracle
