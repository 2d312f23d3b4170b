#include "random_schema.hpp"

#include "wfsat/error.hpp"
#include "wfsat/model.hpp"
#include "wfsat/oracle.hpp"
#include "wfsat/parser.hpp"
#include "wfsat/sequences.hpp"

#include <doctest.h>

using namespace wfsat;
using N = CompositionNode;

namespace {

Poset poset_of(const NodePtr& root, ElementTable& table)
{
    table = index_elements(*root);
    return compile_poset(*root, table);
}

ElementIndex at(const ElementTable& t, const char* id)
{
    return *t.find(id);
}

} // namespace

TEST_CASE("serial composition orders its children")
{
    ElementTable t;
    const Poset p = poset_of(N::seq(N::step("s1"), N::step("s2")), t);
    CHECK(p.less(at(t, "s1"), at(t, "s2")));
    CHECK_FALSE(p.less(at(t, "s2"), at(t, "s1")));
}

TEST_CASE("parallel children are incomparable")
{
    ElementTable t;
    const Poset p = poset_of(N::par(N::step("s3"), N::step("s4")), t);
    CHECK_FALSE(p.less(at(t, "s3"), at(t, "s4")));
    CHECK_FALSE(p.less(at(t, "s4"), at(t, "s3")));
}

TEST_CASE("upper branch of the purchase-order workflow")
{
    // s1 < s2 < {s3 < s5 || s4} < s6
    const NodePtr root = N::fold(
        NodeKind::seq, {N::step("s1"), N::step("s2"),
                        N::par(N::step("s4"), N::seq(N::step("s3"), N::step("s5"))), N::step("s6")});
    ElementTable t;
    const Poset p = poset_of(root, t);
    CHECK(p.less(at(t, "s1"), at(t, "s2")));
    CHECK(p.less(at(t, "s2"), at(t, "s3")));
    CHECK(p.less(at(t, "s2"), at(t, "s4")));
    CHECK(p.less(at(t, "s3"), at(t, "s5")));
    CHECK(p.less(at(t, "s5"), at(t, "s6")));
    CHECK(p.less(at(t, "s4"), at(t, "s6")));
    CHECK(p.less(at(t, "s1"), at(t, "s6")));
    for (const char* x : {"s3", "s5"}) {
        CHECK_FALSE(p.less(at(t, "s4"), at(t, x)));
        CHECK_FALSE(p.less(at(t, x), at(t, "s4")));
    }
    CHECK(p.is_linear_extension(p.elements()));
}

TEST_CASE("compile_poset rejects xor")
{
    const NodePtr root = N::choice(N::step("a"), N::step("b"));
    const auto t = index_elements(*root);
    CHECK_THROWS_AS(compile_poset(*root, t), XorPresent);
}

TEST_CASE("exclusive pairs")
{
    SUBCASE("purchase order")
    {
        const Schema s = load_ccws(testing::data_file("purchase_order.json"));
        const auto pairs = exclusive_pairs(*s.workflow, s.elements);
        const auto s3 = s.element("s3"), s5 = s.element("s5"), s3p = s.element("s3'");
        std::set<std::pair<ElementIndex, ElementIndex>> want{{std::min(s3, s3p), std::max(s3, s3p)},
                                                             {std::min(s5, s3p), std::max(s5, s3p)}};
        CHECK(pairs == want);
    }
    SUBCASE("xor-free")
    {
        const NodePtr root = N::par(N::step("a"), N::seq(N::step("b"), N::release("r")));
        CHECK(exclusive_pairs(*root, index_elements(*root)).empty());
    }
    SUBCASE("nested")
    {
        const NodePtr root = N::choice(N::step("a"), N::choice(N::step("b"), N::step("c")));
        const auto t = index_elements(*root);
        std::set<std::pair<ElementIndex, ElementIndex>> want{{0, 1}, {0, 2}, {1, 2}};
        CHECK(exclusive_pairs(*root, t) == want);
    }
}

TEST_CASE("fold is left-associative")
{
    const NodePtr root = N::fold(NodeKind::par, {N::step("a"), N::step("b"), N::step("c")});
    REQUIRE(root->kind() == NodeKind::par);
    CHECK(root->right()->id() == "c");
    CHECK(root->left()->kind() == NodeKind::par);
    CHECK(N::fold(NodeKind::seq, {N::step("x")})->id() == "x");
}

TEST_CASE("element table rejects more than 64 leaves")
{
    std::vector<NodePtr> leaves;
    for (int i = 0; i < 65; ++i) {
        leaves.push_back(N::step("s" + std::to_string(i)));
    }
    CHECK_THROWS_AS(index_elements(*N::fold(NodeKind::par, leaves)), SizeLimit);
}

TEST_CASE("validate_schema")
{
    SUBCASE("purchase order is well formed")
    {
        CHECK(validate_schema(load_ccws(testing::data_file("purchase_order.json"))).ok());
    }
    Schema s = load_ccws(testing::data_file("purchase_order.json"));
    SUBCASE("exclusive steps in scope")
    {
        s.constraints.push_back({"bad", ConstraintKind::sod, 0, s.mask_of({"s3", "s3'"}), 0, 1});
        const auto report = validate_schema(s);
        CHECK(report.has("exclusive_scope"));
        CHECK(report.to_string().find("exclusive steps in scope") != std::string::npos);
    }
    SUBCASE("step without authorized user")
    {
        for (auto&& cell : s.authorized[s.element("s2")]) {
            cell = false;
        }
        s.default_unauth_penalty = 0;
        CHECK(validate_schema(s).has("unauthorized_step"));
    }
    SUBCASE("sod arity")
    {
        s.constraints[1].scope = s.mask_of({"s3", "s5", "s6"});
        CHECK(validate_schema(s).has("arity"));
    }
    SUBCASE("k range")
    {
        s.constraints.push_back({"am", ConstraintKind::at_most, 3, s.mask_of({"s1", "s2"}), 0, 1});
        CHECK(validate_schema(s).has("k_range"));
    }
    SUBCASE("release set names a step")
    {
        s.constraints[0].release = s.mask_of({"s2"});
        CHECK(validate_schema(s).has("release_not_releases"));
    }
    SUBCASE("zero weight")
    {
        s.constraints[0].weight = 0;
        CHECK(validate_schema(s).has("weight"));
    }
    SUBCASE("probability out of range")
    {
        s.probability = Rational(3, 2);
        CHECK(validate_schema(s).has("probability"));
    }
}

TEST_CASE("random posets are irreflexive, transitive and acyclic")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const NodePtr root = testing::random_tree(rng, 1 + rng() % 8, rng() % 3, 0);
        const auto t = index_elements(*root);
        const Poset p = compile_poset(*root, t);
        const auto elems = p.elements();
        for (auto a : elems) {
            CHECK_FALSE(p.less(a, a));
            for (auto b : elems) {
                if (p.less(a, b)) {
                    CHECK_FALSE(p.less(b, a));
                    // Canonical index order is a linear extension.
                    CHECK(a < b);
                    for (auto c : elems) {
                        if (p.less(b, c)) {
                            CHECK(p.less(a, c));
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("poset order equals precedence in every sequence")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t steps = 1 + rng() % 5;
        const std::size_t releases = rng() % (8 - steps);
        const NodePtr root = testing::random_tree(rng, steps, std::min<std::size_t>(releases, 2), 0);
        const auto t = index_elements(*root);
        const Poset p = compile_poset(*root, t);
        const auto seqs = gen_sequences(*root, t);
        for (auto a : p.elements()) {
            for (auto b : p.elements()) {
                if (a == b) {
                    continue;
                }
                bool always = true;
                for (const auto& s : seqs) {
                    always = always && std::find(s.begin(), s.end(), a) < std::find(s.begin(), s.end(), b);
                }
                CHECK(always == p.less(a, b));
            }
        }
    }
}

TEST_CASE("exclusive elements never share a sequence")
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        const NodePtr root = testing::random_tree(rng, 1 + rng() % 5, rng() % 3, 2);
        const auto t = index_elements(*root);
        const auto pairs = exclusive_pairs(*root, t);
        for (const auto& s : oracle::all_sequences(*root, t, 100000)) {
            const ElementMask m = elements_of(s);
            for (const auto& [a, b] : pairs) {
                CHECK_FALSE((contains(m, a) && contains(m, b)));
            }
        }
    }
}
