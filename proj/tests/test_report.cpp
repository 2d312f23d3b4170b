#include "random_schema.hpp"
#include "schema_check.hpp"

#include "wfsat/decide.hpp"
#include "wfsat/oracle.hpp"
#include "wfsat/parser.hpp"
#include "wfsat/report.hpp"

#include <doctest.h>

using namespace wfsat;
using nlohmann::json;

namespace {

void require_valid(const testing::SchemaCheck& check, const std::string& text)
{
    const auto errors = check.errors(json::parse(text));
    for (const auto& e : errors) {
        MESSAGE(e);
    }
    CHECK(errors.empty());
}

} // namespace

TEST_CASE("the validator rejects malformed reports")
{
    const auto check = testing::load_report_schema();
    const Schema s = load_ccws(testing::data_file("fixture_ac3.json"));
    const json good = json::parse(decision_report_json(decide(s, Problem::solve, {}, {}, 1), s));
    CHECK(check.errors(good).empty());

    json missing = good;
    missing.erase("totals");
    CHECK_FALSE(check.errors(missing).empty());
    json extra = good;
    extra["surprise"] = 1;
    CHECK_FALSE(check.errors(extra).empty());
    json bad_answer = good;
    bad_answer["answer"] = "maybe";
    CHECK_FALSE(check.errors(bad_answer).empty());
    json bad_rational = good;
    bad_rational["aggregate"]["expected_cost"] = "3.5";
    CHECK_FALSE(check.errors(bad_rational).empty());
    json bad_record = good;
    bad_record["records"][0].erase("plan");
    bad_record["records"][0]["cost"] = -1;
    CHECK_FALSE(check.errors(bad_record).empty());
}

TEST_CASE("every report kind validates")
{
    const auto check = testing::load_report_schema();
    std::mt19937_64 rng(53);
    std::vector<Schema> corpus;
    for (const char* f : {"purchase_order_plain.json", "purchase_order.json", "fixture_ac3.json"}) {
        corpus.push_back(load_ccws(testing::data_file(f)));
    }
    for (int i = 0; i < 30; ++i) {
        corpus.push_back(testing::random_schema(rng));
    }
    for (const auto& s : corpus) {
        const Rational budget(static_cast<int>(rng() % 10));
        const Rational prob(static_cast<int>(rng() % 5), 4);
        for (Problem p : {Problem::strong, Problem::bounded, Problem::expected, Problem::approx, Problem::solve,
                          Problem::min_budget_bounded, Problem::min_budget_expected}) {
            DecisionReport report;
            try {
                report = decide(s, p, budget, prob, 1);
            } catch (const ZeroWeight&) {
                continue;
            }
            require_valid(check, decision_report_json(report, s, false));
            require_valid(check, decision_report_json(report, s, true));
        }
        for (auto what : {EnumerateWhat::instances, EnumerateWhat::arrangements, EnumerateWhat::sequences}) {
            require_valid(check, enumerate_report_json(s, what, 100000));
        }
        const auto o = oracle::decide(s, budget, prob);
        require_valid(check, oracle_report_json(o, s, "oracle-approx", o.approx, budget, prob));
    }
}

TEST_CASE("reports are byte-identical across runs and worker counts")
{
    std::mt19937_64 rng(59);
    for (int i = 0; i < 20; ++i) {
        const Schema s = testing::random_schema(rng);
        const auto one = decision_report_json(decide(s, Problem::solve, {}, {}, 1), s);
        CHECK(one == decision_report_json(decide(s, Problem::solve, {}, {}, 1), s));
        CHECK(one == decision_report_json(decide(s, Problem::solve, {}, {}, 8), s));
        CHECK(one.find("timings") == std::string::npos);
    }
}

TEST_CASE("large counts are emitted as strings")
{
    std::vector<NodePtr> leaves;
    for (int i = 0; i < 21; ++i) {
        leaves.push_back(CompositionNode::step("p" + std::to_string(i)));
    }
    Schema s = Schema::create(CompositionNode::fold(NodeKind::par, leaves), {"u"});
    for_each_bit(s.steps(), [&](ElementIndex e) { s.authorized[e][0] = true; });
    const json doc = json::parse(enumerate_report_json(s, EnumerateWhat::instances, 1));
    CHECK(doc["totals"]["sequences"] == "51090942171709440000");
    CHECK(testing::load_report_schema().errors(doc).empty());
}
