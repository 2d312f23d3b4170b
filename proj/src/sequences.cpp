#include "wfsat/sequences.hpp"

#include "wfsat/error.hpp"

#include <algorithm>
#include <unordered_map>

namespace wfsat {

ElementMask elements_of(const ExecutionSequence& seq)
{
    ElementMask m = 0;
    for (ElementIndex e : seq) {
        m |= bit(e);
    }
    return m;
}

namespace {

void require_disjoint(const ExecutionSequence& a, const ExecutionSequence& b)
{
    if ((elements_of(a) & elements_of(b)) != 0) {
        throw OverlapError("sequences share an element");
    }
}

void shuffle_into(const ExecutionSequence& a, std::size_t i, const ExecutionSequence& b, std::size_t j,
                  ExecutionSequence& prefix, std::vector<ExecutionSequence>& out)
{
    if (i == a.size() && j == b.size()) {
        out.push_back(prefix);
        return;
    }
    if (i < a.size()) {
        prefix.push_back(a[i]);
        shuffle_into(a, i + 1, b, j, prefix, out);
        prefix.pop_back();
    }
    if (j < b.size()) {
        prefix.push_back(b[j]);
        shuffle_into(a, i, b, j + 1, prefix, out);
        prefix.pop_back();
    }
}

std::vector<ExecutionSequence> shuffles(const ExecutionSequence& a, const ExecutionSequence& b)
{
    std::vector<ExecutionSequence> out;
    ExecutionSequence prefix;
    prefix.reserve(a.size() + b.size());
    shuffle_into(a, 0, b, 0, prefix, out);
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

std::vector<ExecutionSequence> generate(const CompositionNode& node, const ElementTable& table, std::size_t limit)
{
    switch (node.kind()) {
    case NodeKind::step:
    case NodeKind::release:
        return {ExecutionSequence{*table.find(node.id())}};
    case NodeKind::choice:
        throw XorPresent("gen_sequences requires an xor-free workflow");
    case NodeKind::seq:
    case NodeKind::par:
        break;
    }
    const auto lhs = generate(*node.left(), table, limit);
    const auto rhs = generate(*node.right(), table, limit);
    BigInt total = BigInt(lhs.size()) * rhs.size();
    if (node.kind() == NodeKind::par) {
        total *= binomial(lhs.front().size() + rhs.front().size(), lhs.front().size());
    }
    if (total > limit) {
        throw SizeLimit("more than " + std::to_string(limit) + " execution sequences");
    }
    std::vector<ExecutionSequence> out;
    out.reserve(static_cast<std::size_t>(total));
    for (const auto& a : lhs) {
        for (const auto& b : rhs) {
            if (node.kind() == NodeKind::seq) {
                out.push_back(concat(a, b));
            } else {
                auto mixed = shuffles(a, b);
                std::move(mixed.begin(), mixed.end(), std::back_inserter(out));
            }
        }
    }
    return out;
}

std::size_t position_of(const ExecutionSequence& seq, ElementIndex v)
{
    const auto it = std::find(seq.begin(), seq.end(), v);
    if (it == seq.end()) {
        throw NotInSequence("element " + std::to_string(v) + " does not occur in the sequence");
    }
    return static_cast<std::size_t>(it - seq.begin());
}

} // namespace

ExecutionSequence concat(const ExecutionSequence& a, const ExecutionSequence& b)
{
    require_disjoint(a, b);
    ExecutionSequence out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::vector<ExecutionSequence> interleave(const ExecutionSequence& a, const ExecutionSequence& b)
{
    require_disjoint(a, b);
    auto out = shuffles(a, b);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ExecutionSequence> gen_sequences(const CompositionNode& node, const ElementTable& table,
                                             std::size_t limit)
{
    auto out = generate(node, table, limit);
    std::sort(out.begin(), out.end());
    return out;
}

ExecutionSequence left(const ExecutionSequence& seq, ElementIndex v)
{
    const auto pos = position_of(seq, v);
    return ExecutionSequence(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(pos));
}

ExecutionSequence right(const ExecutionSequence& seq, ElementIndex v)
{
    const auto pos = position_of(seq, v);
    return ExecutionSequence(seq.begin() + static_cast<std::ptrdiff_t>(pos) + 1, seq.end());
}

ExecutionSequence between(const ExecutionSequence& seq, ElementIndex u, ElementIndex v)
{
    const auto pu = position_of(seq, u);
    const auto pv = position_of(seq, v);
    if (pu >= pv) {
        throw NotInSequence("between: first element does not precede the second");
    }
    return ExecutionSequence(seq.begin() + static_cast<std::ptrdiff_t>(pu) + 1,
                             seq.begin() + static_cast<std::ptrdiff_t>(pv));
}

bool equivalent(const ExecutionSequence& a, const ExecutionSequence& b, const ElementTable& table)
{
    const ElementMask releases = table.releases();
    auto release_order = [&](const ExecutionSequence& s) {
        ExecutionSequence out;
        std::copy_if(s.begin(), s.end(), std::back_inserter(out), [&](ElementIndex e) { return contains(releases, e); });
        return out;
    };
    if (release_order(a) != release_order(b)) {
        return false;
    }
    const ElementMask steps_a = elements_of(a) & ~releases;
    if (steps_a != (elements_of(b) & ~releases)) {
        return false;
    }
    bool same = true;
    for_each_bit(steps_a, [&](ElementIndex s) {
        same = same && (elements_of(right(a, s)) & releases) == (elements_of(right(b, s)) & releases);
    });
    return same;
}

BigInt count_linear_extensions(const Poset& poset, ElementMask subset)
{
    const auto members = indices_of(subset);
    const std::size_t n = members.size();
    if (n > 32) {
        throw SizeLimit("linear-extension counting is limited to 32 elements");
    }
    // Predecessors within the subset, in local bit positions.
    std::vector<std::uint64_t> preds(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (poset.less(members[j], members[i])) {
                preds[i] |= std::uint64_t{1} << j;
            }
        }
    }
    // Layer k holds every down-closed subset of size k with its count.
    std::unordered_map<std::uint64_t, BigInt> layer{{0, 1}};
    for (std::size_t k = 0; k < n; ++k) {
        std::unordered_map<std::uint64_t, BigInt> next;
        for (const auto& [down, ways] : layer) {
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint64_t b = std::uint64_t{1} << i;
                if ((down & b) == 0 && (preds[i] & ~down) == 0) {
                    next[down | b] += ways;
                }
            }
        }
        layer = std::move(next);
    }
    BigInt total = 0;
    for (const auto& [down, ways] : layer) {
        total += ways;
    }
    return total;
}

} // namespace wfsat
