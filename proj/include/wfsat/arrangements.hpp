#pragma once

#include "wfsat/model.hpp"
#include "wfsat/sequences.hpp"

#include <compare>
#include <string>
#include <utility>
#include <vector>

namespace wfsat {

enum class Branch { left, right };

/// One xor-free instance of a workflow: every xor node resolved to one
/// branch. `choices` maps xor-node paths ("/" is the root, "/l/r" the right
/// child of the root's left child) to the branch taken, in pre-order.
struct XorFreeInstance {
    NodePtr ast;
    Poset poset;
    std::vector<std::pair<std::string, Branch>> choices;

    ElementMask members() const { return poset.members(); }
};

/// Expands every xor node. Instances come out in branch order (left before
/// right, outer choices most significant).
std::vector<XorFreeInstance> eliminate_xor(const NodePtr& root, const ElementTable& table);

/// Compact form (S_1, r_1, S_2, ..., r_{q-1}, S_q) of an equivalence class
/// of execution sequences. `slots.size() == release_order.size() + 1`;
/// slots may be empty.
struct Arrangement {
    std::size_t instance = 0;
    std::vector<ElementIndex> release_order;
    std::vector<ElementMask> slots;

    ElementMask steps() const;
    /// Slot index holding `step`; slots.size() if absent.
    std::size_t slot_of(ElementIndex step) const;

    auto operator<=>(const Arrangement&) const = default;
};

/// One arrangement per equivalence class of the instance's sequences.
/// Order: release permutations lexicographically, then slot vectors
/// lexicographically over steps in element order.
std::vector<Arrangement> enumerate_arrangements(const XorFreeInstance& instance, const ElementTable& table,
                                                std::size_t instance_index = 0);

/// The class containing `seq`. Throws NotASequence when `seq` is not an
/// execution sequence of the instance.
Arrangement arrangement_of(const ExecutionSequence& seq, const XorFreeInstance& instance,
                           const ElementTable& table, std::size_t instance_index = 0);

/// Size of the arrangement's class: product of per-slot linear-extension
/// counts.
BigInt count_sequences(const Arrangement& arrangement, const XorFreeInstance& instance);

/// Human-readable violations of the arrangement properties; empty when the
/// arrangement is well formed for `instance`.
std::vector<std::string> arrangement_violations(const Arrangement& arrangement, const XorFreeInstance& instance,
                                                const ElementTable& table);

/// "{s1,s2}, r, {s4,s6}" rendering.
std::string describe(const Arrangement& arrangement, const ElementTable& table);

} // namespace wfsat
