#include "random_schema.hpp"

#include "wfsat/arrangements.hpp"
#include "wfsat/error.hpp"
#include "wfsat/parser.hpp"
#include "wfsat/sequences.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace wfsat;
using N = CompositionNode;

namespace {

// Every permutation of the elements that respects the poset.
std::vector<ExecutionSequence> permutation_filter(const Poset& poset)
{
    std::vector<ExecutionSequence> out;
    ExecutionSequence perm = poset.elements();
    do {
        if (poset.is_linear_extension(perm)) {
            out.push_back(perm);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

ExecutionSequence ids(const Schema& s, std::initializer_list<const char*> names)
{
    ExecutionSequence out;
    for (const char* n : names) {
        out.push_back(s.element(n));
    }
    return out;
}

BigInt binomial(std::size_t n, std::size_t k)
{
    BigInt r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

} // namespace

TEST_CASE("concat")
{
    CHECK(concat({0}, {1}) == ExecutionSequence{0, 1});
    CHECK(concat({3, 4}, {}) == ExecutionSequence{3, 4});
    CHECK(concat({0, 1}, {4, 2}) == ExecutionSequence{0, 1, 4, 2});
    CHECK_THROWS_AS(concat({0, 1}, {1}), OverlapError);
}

TEST_CASE("interleave")
{
    CHECK(interleave({0}, {1}) == std::vector<ExecutionSequence>{{0, 1}, {1, 0}});
    CHECK(interleave({2, 5}, {}) == std::vector<ExecutionSequence>{{2, 5}});
    CHECK(interleave({}, {2, 5}) == std::vector<ExecutionSequence>{{2, 5}});
    CHECK(interleave({3, 4}, {2}).size() == 3);
    CHECK_THROWS_AS(interleave({1}, {1}), OverlapError);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = rng() % 11;
        const std::size_t k = n == 0 ? 0 : rng() % (n + 1);
        ExecutionSequence all(n);
        std::iota(all.begin(), all.end(), 0);
        std::shuffle(all.begin(), all.end(), rng);
        const ExecutionSequence a(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
        const ExecutionSequence b(all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
        const auto shuffles = interleave(a, b);
        CHECK(BigInt(shuffles.size()) == binomial(n, k));
        CHECK(std::is_sorted(shuffles.begin(), shuffles.end()));
        CHECK(std::adjacent_find(shuffles.begin(), shuffles.end()) == shuffles.end());
    }
}

TEST_CASE("upper branch sequences without release point")
{
    const Schema s = load_ccws(testing::data_file("purchase_order_plain.json"));
    const auto instances = eliminate_xor(s.workflow, s.elements);
    REQUIRE(instances.size() == 2);
    const std::vector<ExecutionSequence> want{ids(s, {"s1", "s2", "s4", "s3", "s5", "s6"}),
                                              ids(s, {"s1", "s2", "s3", "s4", "s5", "s6"}),
                                              ids(s, {"s1", "s2", "s3", "s5", "s4", "s6"})};
    CHECK(gen_sequences(*instances[0].ast, s.elements) == want);
}

TEST_CASE("purchase order lower branch sequences")
{
    const Schema s = load_ccws(testing::data_file("purchase_order.json"));
    const auto instances = eliminate_xor(s.workflow, s.elements);
    auto got = gen_sequences(*instances[1].ast, s.elements);
    std::vector<ExecutionSequence> want{ids(s, {"s1", "s2", "s3'", "s4", "r", "s6"}),
                                        ids(s, {"s1", "s2", "s4", "s3'", "r", "s6"}),
                                        ids(s, {"s1", "s2", "s3'", "r", "s4", "s6"})};
    std::sort(want.begin(), want.end());
    CHECK(got == want);
}

TEST_CASE("chain has one sequence; xor and cap are rejected")
{
    const NodePtr chain = N::fold(NodeKind::seq, {N::step("a"), N::step("b"), N::step("c"), N::step("d")});
    CHECK(gen_sequences(*chain, index_elements(*chain)).size() == 1);

    const NodePtr x = N::choice(N::step("a"), N::step("b"));
    CHECK_THROWS_AS(gen_sequences(*x, index_elements(*x)), XorPresent);

    std::vector<NodePtr> leaves;
    for (int i = 0; i < 6; ++i) {
        leaves.push_back(N::step("p" + std::to_string(i)));
    }
    const NodePtr wide = N::fold(NodeKind::par, leaves);
    CHECK(gen_sequences(*wide, index_elements(*wide), 720).size() == 720);
    CHECK_THROWS_AS(gen_sequences(*wide, index_elements(*wide), 719), SizeLimit);
}

TEST_CASE("left, right, between")
{
    const ExecutionSequence s{1, 2, 9, 4};
    CHECK(right(s, 2) == ExecutionSequence{9, 4});
    CHECK(left(s, 1).empty());
    CHECK(left(s, 9) == ExecutionSequence{1, 2});
    CHECK(between({1, 7, 2, 8}, 7, 8) == ExecutionSequence{2});
    CHECK_THROWS_AS(right(s, 5), NotInSequence);
    CHECK_THROWS_AS(between(s, 4, 1), NotInSequence);
}

TEST_CASE("equivalence examples")
{
    const Schema s = load_ccws(testing::data_file("purchase_order.json"));
    const auto a = ids(s, {"s1", "s2", "s3", "s4", "s5", "r", "s6"});
    const auto b = ids(s, {"s1", "s2", "s4", "s3", "s5", "r", "s6"});
    const auto c = ids(s, {"s1", "s2", "s3", "s5", "s4", "r", "s6"});
    const auto d = ids(s, {"s1", "s2", "s3", "s5", "r", "s4", "s6"});
    CHECK(equivalent(a, b, s.elements));
    CHECK(equivalent(a, c, s.elements));
    CHECK_FALSE(equivalent(c, d, s.elements));
    CHECK(equivalent(d, d, s.elements));
}

TEST_CASE("gen_sequences matches an independent permutation filter")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t steps = 1 + rng() % 6;
        const std::size_t releases = rng() % (std::min<std::size_t>(2, 7 - steps) + 1);
        const NodePtr root = testing::random_tree(rng, steps, releases, 0);
        const auto t = index_elements(*root);
        const Poset p = compile_poset(*root, t);
        const auto got = gen_sequences(*root, t);
        CHECK(got == permutation_filter(p));
        CHECK(BigInt(got.size()) == count_linear_extensions(p, p.members()));
    }
}

TEST_CASE("equivalence is reflexive, symmetric and transitive")
{
    std::mt19937_64 rng(9);
    std::vector<Schema> corpus;
    for (const char* f : {"purchase_order_plain.json", "purchase_order.json"}) {
        corpus.push_back(load_ccws(testing::data_file(f)));
    }
    for (int i = 0; i < 30; ++i) {
        corpus.push_back(testing::random_schema(rng));
    }
    for (const auto& s : corpus) {
        std::vector<ExecutionSequence> all;
        for (const auto& inst : eliminate_xor(s.workflow, s.elements)) {
            const auto seqs = gen_sequences(*inst.ast, s.elements);
            all.insert(all.end(), seqs.begin(), seqs.end());
        }
        for (const auto& x : all) {
            CHECK(equivalent(x, x, s.elements));
            for (const auto& y : all) {
                const bool xy = equivalent(x, y, s.elements);
                CHECK(xy == equivalent(y, x, s.elements));
                if (!xy) {
                    continue;
                }
                for (const auto& z : all) {
                    if (equivalent(y, z, s.elements)) {
                        CHECK(equivalent(x, z, s.elements));
                    }
                }
            }
        }
    }
}

TEST_CASE("linear extension counts")
{
    const NodePtr chain = N::fold(NodeKind::seq, {N::step("a"), N::step("b"), N::step("c")});
    const Poset pc = compile_poset(*chain, index_elements(*chain));
    CHECK(count_linear_extensions(pc, pc.members()) == 1);
    CHECK(count_linear_extensions(pc, 0) == 1);

    const NodePtr anti = N::fold(NodeKind::par, {N::step("a"), N::step("b"), N::step("c")});
    const Poset pa = compile_poset(*anti, index_elements(*anti));
    CHECK(count_linear_extensions(pa, pa.members()) == 6);

    const Schema s = load_ccws(testing::data_file("purchase_order.json"));
    const auto upper = eliminate_xor(s.workflow, s.elements).at(0);
    CHECK(count_linear_extensions(upper.poset, s.mask_of({"s1", "s2", "s3", "s4", "s5"})) == 3);

    std::vector<NodePtr> leaves;
    for (int i = 0; i < 12; ++i) {
        leaves.push_back(N::step("p" + std::to_string(i)));
    }
    const NodePtr wide = N::fold(NodeKind::par, leaves);
    const Poset pw = compile_poset(*wide, index_elements(*wide));
    CHECK(count_linear_extensions(pw, pw.members()) == BigInt(479001600));
}
