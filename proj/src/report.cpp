#include "wfsat/report.hpp"

#include "wfsat/arrangements.hpp"
#include "wfsat/sequences.hpp"

#include <json.hpp>

#include <limits>

namespace wfsat {

using nlohmann::json;

namespace {

json big(const BigInt& value)
{
    if (value >= 0 && value <= std::numeric_limits<std::uint64_t>::max()) {
        return value.convert_to<std::uint64_t>();
    }
    return value.str();
}

json opt_rational(const std::optional<Rational>& value)
{
    return value ? json(format_rational(*value)) : json(nullptr);
}

json opt_answer(std::optional<bool> answer)
{
    return answer ? json(*answer ? "yes" : "no") : json(nullptr);
}

json ids(const Schema& schema, const std::vector<ElementIndex>& list)
{
    json arr = json::array();
    for (ElementIndex e : list) {
        arr.push_back(schema.elements.ids[e]);
    }
    return arr;
}

json ids(const Schema& schema, ElementMask m)
{
    return ids(schema, indices_of(m));
}

json choices_json(const XorFreeInstance& instance)
{
    json obj = json::object();
    for (const auto& [path, branch] : instance.choices) {
        obj[path] = branch == Branch::left ? "left" : "right";
    }
    return obj;
}

json arrangement_json(const Arrangement& a, const Schema& schema)
{
    json slots = json::array();
    for (ElementMask s : a.slots) {
        slots.push_back(ids(schema, s));
    }
    return json{{"instance", a.instance},
                {"release_order", ids(schema, a.release_order)},
                {"slots", std::move(slots)},
                {"arrangement", describe(a, schema.elements)}};
}

json plan_json(const Plan& plan, const Schema& schema)
{
    json obj = json::object();
    for (const auto& [step, user] : plan.assignment) {
        obj[schema.elements.ids[step]] = schema.users[user];
    }
    return obj;
}

json base(std::string_view problem, std::optional<bool> answer, const std::optional<Rational>& budget,
          const std::optional<Rational>& probability)
{
    return json{{"problem", std::string(problem)},
                {"answer", opt_answer(answer)},
                {"budget", opt_rational(budget)},
                {"probability", opt_rational(probability)}};
}

json totals(const BigInt& sequences, std::size_t arrangements, std::size_t instances)
{
    return json{{"sequences", big(sequences)}, {"arrangements", arrangements}, {"instances", instances}};
}

} // namespace

std::string decision_report_json(const DecisionReport& report, const Schema& schema, bool timings)
{
    const Analysis& a = report.analysis;
    json doc = base(to_string(report.problem), report.answer, report.budget, report.probability);
    doc["totals"] = totals(a.total_sequences, a.records.size(), a.instances.size());

    json records = json::array();
    for (const auto& rec : a.records) {
        json r = arrangement_json(rec.arrangement, schema);
        r["count"] = big(rec.count);
        r["cost"] = rec.best.total;
        r["constraint_weight"] = rec.best.constraint_weight;
        r["authorization_weight"] = rec.best.authorization_weight;
        r["plan"] = plan_json(rec.best.plan, schema);
        r["choices"] = choices_json(a.instances[rec.arrangement.instance]);
        records.push_back(std::move(r));
    }
    doc["records"] = std::move(records);
    doc["aggregate"] = json{{"max_cost", report.max_cost},
                            {"expected_cost", format_rational(report.expected_cost)},
                            {"within_budget", report.within_budget ? big(*report.within_budget) : json(nullptr)}};
    doc["failing_record"] = report.failing_record ? json(*report.failing_record) : json(nullptr);
    doc["min_budget"] = opt_rational(report.min_budget);
    if (timings) {
        doc["timings"] = json{{"enumerate_seconds", a.enumerate_seconds}, {"solve_seconds", a.solve_seconds}};
    }
    return doc.dump(2) + "\n";
}

std::string oracle_report_json(const oracle::Report& report, const Schema& schema, std::string_view problem,
                               std::optional<bool> answer, const std::optional<Rational>& budget,
                               const std::optional<Rational>& probability)
{
    json doc = base(problem, answer, budget, probability);
    doc["totals"] = totals(report.total, report.classes.size(), eliminate_xor(schema.workflow, schema.elements).size());
    json records = json::array();
    for (const auto& cls : report.classes) {
        json seqs = json::array();
        for (std::size_t i : cls.members) {
            seqs.push_back(ids(schema, report.sequences[i]));
        }
        records.push_back(json{{"sequences", std::move(seqs)}, {"count", cls.members.size()}, {"cost", cls.min_cost}});
    }
    doc["records"] = std::move(records);
    doc["aggregate"] = json{{"max_cost", report.max_cost},
                            {"expected_cost", format_rational(report.expected_cost)},
                            {"within_budget", report.within_budget ? big(*report.within_budget) : json(nullptr)}};
    return doc.dump(2) + "\n";
}

std::string enumerate_report_json(const Schema& schema, EnumerateWhat what, std::size_t limit)
{
    const auto instances = eliminate_xor(schema.workflow, schema.elements);
    json records = json::array();
    BigInt total = 0;
    std::size_t arrangement_count = 0;

    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto arrangements = enumerate_arrangements(instances[i], schema.elements, i);
        arrangement_count += arrangements.size();
        BigInt instance_total = 0;
        for (const auto& arr : arrangements) {
            const BigInt n = count_sequences(arr, instances[i]);
            instance_total += n;
            if (what == EnumerateWhat::arrangements) {
                json r = arrangement_json(arr, schema);
                r["count"] = big(n);
                r["choices"] = choices_json(instances[i]);
                records.push_back(std::move(r));
            }
        }
        total += instance_total;
        if (what == EnumerateWhat::instances) {
            records.push_back(json{{"instance", i},
                                   {"choices", choices_json(instances[i])},
                                   {"elements", ids(schema, instances[i].members())},
                                   {"arrangements", arrangements.size()},
                                   {"sequences", big(instance_total)}});
        } else if (what == EnumerateWhat::sequences) {
            for (const auto& seq : gen_sequences(*instances[i].ast, schema.elements, limit)) {
                records.push_back(json{{"instance", i}, {"sequence", ids(schema, seq)}});
            }
        }
    }

    const char* name = what == EnumerateWhat::instances      ? "enumerate-instances"
                       : what == EnumerateWhat::arrangements ? "enumerate-arrangements"
                                                             : "enumerate-sequences";
    json doc = base(name, std::nullopt, std::nullopt, std::nullopt);
    doc["totals"] = totals(total, arrangement_count, instances.size());
    doc["records"] = std::move(records);
    return doc.dump(2) + "\n";
}

} // namespace wfsat
