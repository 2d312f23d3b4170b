#include "random_schema.hpp"

#include "wfsat/decide.hpp"
#include "wfsat/error.hpp"
#include "wfsat/oracle.hpp"
#include "wfsat/parser.hpp"
#include "wfsat/sequences.hpp"

#include <doctest.h>

#include <map>

using namespace wfsat;

namespace {

oracle::Sequence ids(const Schema& s, std::initializer_list<const char*> names)
{
    oracle::Sequence out;
    for (const char* n : names) {
        out.push_back(s.element(n));
    }
    return out;
}

} // namespace

TEST_CASE("per-sequence minima on the AC-3 fixture")
{
    const Schema s = load_ccws(testing::data_file("fixture_ac3.json"));
    CHECK(oracle::min_cost_sequence(ids(s, {"s1", "s2", "s3", "s5", "r", "s4", "s6"}), s).total == 0);
    const auto bad = oracle::min_cost_sequence(ids(s, {"s1", "s2", "s4", "s3", "s5", "r", "s6"}), s);
    CHECK(bad.total == 5);
    CHECK(oracle::plan_cost(ids(s, {"s1", "s2", "s4", "s3", "s5", "r", "s6"}), bad.plan, s) == 5);

    Schema free = Schema::create(s.workflow, s.users);
    for_each_bit(free.steps(), [&](ElementIndex st) { free.authorized[st].assign(3, true); });
    CHECK(oracle::min_cost_sequence(ids(s, {"s1", "s2", "s4", "s3", "s5", "r", "s6"}), free).total == 0);
}

TEST_CASE("oracle decisions on the AC-3 fixture")
{
    const Schema s = load_ccws(testing::data_file("fixture_ac3.json"));
    const auto r = oracle::decide(s, Rational(0), Rational(2, 7));
    CHECK(r.total == 7);
    CHECK(r.sequences.size() == 7);
    CHECK(r.classes.size() == 4);
    CHECK(r.max_cost == 5);
    CHECK(r.expected_cost == Rational(25, 7));
    CHECK_FALSE(r.strong);
    CHECK(*r.approx);
    CHECK_FALSE(*r.bounded);
    CHECK(*r.within_budget == 2);
    CHECK_FALSE(*oracle::decide(s, Rational(3), std::nullopt).expected);
    CHECK(*oracle::decide(s, Rational(4), std::nullopt).expected);
    CHECK_FALSE(*oracle::decide(s, Rational(0), Rational(3, 7)).approx);
}

TEST_CASE("unconstrained schema is yes everywhere")
{
    Schema s = load_ccws(testing::data_file("purchase_order.json"));
    s.constraints.clear();
    const auto r = oracle::decide(s, Rational(0), Rational(1));
    CHECK(r.strong);
    CHECK(*r.bounded);
    CHECK(*r.expected);
    CHECK(*r.approx);
}

TEST_CASE("oracle sequence set matches the algebra of the whole workflow")
{
    const Schema s = load_ccws(testing::data_file("purchase_order_plain.json"));
    const auto seqs = oracle::all_sequences(*s.workflow, s.elements, 100);
    CHECK(seqs.size() == 5);
    CHECK_THROWS_AS(oracle::all_sequences(*s.workflow, s.elements, 4), SizeLimit);
    oracle::Limits tight;
    tight.plans = 10;
    CHECK_THROWS_AS(oracle::min_cost_sequence(seqs[0], s, tight), SizeLimit);
}

TEST_CASE("oracle classes reproduce the arrangement records")
{
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 80; ++trial) {
        const Schema s = testing::random_schema(rng);
        const auto r = oracle::decide(s, std::nullopt, std::nullopt);
        const Analysis a = analyze(s, 1);
        REQUIRE(r.classes.size() == a.records.size());
        CHECK(r.total == a.total_sequences);
        std::multiset<std::pair<std::size_t, std::int64_t>> oracle_side, main_side;
        for (const auto& c : r.classes) {
            oracle_side.emplace(c.members.size(), c.min_cost);
            // Classes agree with the equivalence relation.
            for (std::size_t m : c.members) {
                CHECK(equivalent(r.sequences[c.members[0]], r.sequences[m], s.elements));
            }
        }
        for (const auto& rec : a.records) {
            main_side.emplace(rec.count.convert_to<std::size_t>(), rec.best.total);
        }
        CHECK(oracle_side == main_side);
    }
}
