#pragma once

#include "wfsat/model.hpp"

#include <cstddef>
#include <vector>

namespace wfsat {

/// Ordered, duplicate-free list of element indices.
using ExecutionSequence = std::vector<ElementIndex>;

inline constexpr std::size_t kDefaultSequenceLimit = 1'000'000;

ElementMask elements_of(const ExecutionSequence& seq);

/// a followed by b. Throws OverlapError if they share an element.
ExecutionSequence concat(const ExecutionSequence& a, const ExecutionSequence& b);

/// All order-preserving shuffles of a and b, in lexicographic order.
std::vector<ExecutionSequence> interleave(const ExecutionSequence& a, const ExecutionSequence& b);

/// Every execution sequence of an xor-free workflow, lexicographic by
/// element index. Throws XorPresent, or SizeLimit when more than `limit`
/// sequences would be produced.
std::vector<ExecutionSequence> gen_sequences(const CompositionNode& node, const ElementTable& table,
                                             std::size_t limit = kDefaultSequenceLimit);

/// Prefix before v, suffix after v, and the infix strictly between u and v.
/// Throw NotInSequence when an element is missing (or u does not precede v).
ExecutionSequence left(const ExecutionSequence& seq, ElementIndex v);
ExecutionSequence right(const ExecutionSequence& seq, ElementIndex v);
ExecutionSequence between(const ExecutionSequence& seq, ElementIndex u, ElementIndex v);

/// Same release-point order, same step set, and every step sees the same
/// release points to its right.
bool equivalent(const ExecutionSequence& a, const ExecutionSequence& b, const ElementTable& table);

/// Number of linear extensions of the poset restricted to `subset`
/// (1 for the empty set). Throws SizeLimit above 30 elements.
BigInt count_linear_extensions(const Poset& poset, ElementMask subset);

} // namespace wfsat
