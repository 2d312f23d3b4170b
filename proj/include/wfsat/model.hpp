#pragma once

#include "wfsat/rational.hpp"

#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wfsat {

/// Index of a step or release point in the schema-wide element table.
using ElementIndex = std::size_t;
using UserIndex = std::size_t;

/// Set of elements, one bit per element index.
using ElementMask = std::uint64_t;

inline constexpr std::size_t kMaxElements = 64;

constexpr ElementMask bit(ElementIndex i) noexcept
{
    return ElementMask{1} << i;
}

constexpr std::size_t count(ElementMask m) noexcept
{
    return static_cast<std::size_t>(std::popcount(m));
}

constexpr bool contains(ElementMask m, ElementIndex i) noexcept
{
    return (m & bit(i)) != 0;
}

/// Calls fn(index) for every set bit, lowest index first.
template <typename Fn>
void for_each_bit(ElementMask m, Fn&& fn)
{
    while (m != 0) {
        const auto i = static_cast<ElementIndex>(std::countr_zero(m));
        fn(i);
        m &= m - 1;
    }
}

std::vector<ElementIndex> indices_of(ElementMask m);

enum class ElementKind { step, release };

enum class NodeKind { step, release, seq, par, choice };

class CompositionNode;
using NodePtr = std::shared_ptr<const CompositionNode>;

/// Binary AST of a compositional workflow. Leaves are steps or release
/// points; internal nodes are serial composition, parallel branching and
/// xor branching (`choice`). Immutable once built.
class CompositionNode {
public:
    static NodePtr step(std::string id);
    static NodePtr release(std::string id);
    static NodePtr seq(NodePtr left, NodePtr right);
    static NodePtr par(NodePtr left, NodePtr right);
    static NodePtr choice(NodePtr left, NodePtr right);

    /// Left-folds an n-ary composition into the binary form. `children`
    /// must be non-empty; a single child is returned unchanged.
    static NodePtr fold(NodeKind kind, std::vector<NodePtr> children);

    NodeKind kind() const noexcept { return kind_; }
    bool is_leaf() const noexcept { return kind_ == NodeKind::step || kind_ == NodeKind::release; }
    const std::string& id() const noexcept { return id_; }
    const NodePtr& left() const noexcept { return left_; }
    const NodePtr& right() const noexcept { return right_; }

    CompositionNode(NodeKind kind, std::string id, NodePtr left, NodePtr right);

private:
    NodeKind kind_;
    std::string id_;
    NodePtr left_;
    NodePtr right_;
};

bool has_choice(const CompositionNode& node);
std::size_t count_choices(const CompositionNode& node);

/// Steps and release points of a workflow in left-to-right leaf order.
/// That order is a linear extension of every xor-free instance, so it
/// serves as the canonical element order everywhere.
struct ElementTable {
    std::vector<std::string> ids;
    std::vector<ElementKind> kinds;

    std::size_t size() const noexcept { return ids.size(); }
    std::optional<ElementIndex> find(std::string_view id) const;
    bool is_step(ElementIndex i) const { return kinds.at(i) == ElementKind::step; }
    ElementMask steps() const;
    ElementMask releases() const;
    ElementMask all() const;
};

/// Throws SizeLimit when the workflow has more than kMaxElements leaves.
ElementTable index_elements(const CompositionNode& root);

/// Leaf ids of `node` as an element mask (resolved through `table`).
ElementMask leaves_of(const CompositionNode& node, const ElementTable& table);

/// Strict partial order on a set of elements. Successor masks are
/// transitively closed.
class Poset {
public:
    Poset() = default;
    Poset(ElementMask members, std::vector<ElementMask> successors);

    ElementMask members() const noexcept { return members_; }
    bool less(ElementIndex a, ElementIndex b) const { return contains(successors_.at(a), b); }
    ElementMask successors(ElementIndex i) const { return successors_.at(i); }
    ElementMask predecessors(ElementIndex i) const;

    /// Canonical linear extension (ascending element index).
    std::vector<ElementIndex> elements() const { return indices_of(members_); }

    /// True when `order` lists exactly the members and respects the order.
    bool is_linear_extension(const std::vector<ElementIndex>& order) const;

private:
    ElementMask members_ = 0;
    std::vector<ElementMask> successors_;
};

/// Order induced by an xor-free AST: u < v iff u sits in a serially earlier
/// component than v. Throws XorPresent if a choice node remains.
Poset compile_poset(const CompositionNode& node, const ElementTable& table);

/// Pairs (lo, hi) of element indices lying in opposite branches of some
/// xor node.
std::set<std::pair<ElementIndex, ElementIndex>> exclusive_pairs(const CompositionNode& node,
                                                               const ElementTable& table);

enum class ConstraintKind { sod, bod, at_most, at_least };

std::string_view to_string(ConstraintKind kind) noexcept;
std::optional<ConstraintKind> constraint_kind_from(std::string_view text) noexcept;

/// User-independent constraint with release points and a unit violation
/// weight. `k` is used by at_most/at_least only.
struct WeightedConstraint {
    std::string id;
    ConstraintKind kind = ConstraintKind::sod;
    std::size_t k = 0;
    ElementMask scope = 0;
    ElementMask release = 0;
    std::int64_t weight = 1;

    bool operator==(const WeightedConstraint&) const = default;
};

/// A constrained compositional workflow schema. Built once, then shared
/// read-only.
struct Schema {
    NodePtr workflow;
    ElementTable elements;
    std::vector<std::string> users;
    /// authorized[element][user]; rows of release points stay all-false.
    std::vector<std::vector<bool>> authorized;
    std::int64_t default_unauth_penalty = 0;
    std::map<ElementIndex, std::int64_t> step_unauth_penalty;
    std::vector<WeightedConstraint> constraints;
    std::optional<Rational> budget;
    std::optional<Rational> probability;

    /// Schema over `workflow` with no authorizations and no constraints.
    static Schema create(NodePtr workflow, std::vector<std::string> users);

    ElementIndex element(std::string_view id) const;
    UserIndex user(std::string_view id) const;
    ElementMask steps() const { return elements.steps(); }
    ElementMask releases() const { return elements.releases(); }

    bool is_authorized(ElementIndex step, UserIndex u) const { return authorized[step][u]; }
    void authorize(std::string_view step, std::string_view user);
    std::int64_t penalty(ElementIndex step) const;

    /// Convenience for tests and builders: resolves ids to a mask.
    ElementMask mask_of(const std::vector<std::string>& ids) const;
};

/// Partial map step -> user.
struct Plan {
    std::map<ElementIndex, UserIndex> assignment;

    bool operator==(const Plan&) const = default;
};

struct Violation {
    std::string code;
    std::string message;
    std::vector<std::string> ids;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    bool has(std::string_view code) const;
    std::string to_string() const;
};

/// Checks every schema invariant; never throws.
ValidationReport validate_schema(const Schema& schema);

} // namespace wfsat
