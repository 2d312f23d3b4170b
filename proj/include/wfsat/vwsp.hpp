#pragma once

#include "wfsat/arrangements.hpp"
#include "wfsat/model.hpp"

#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace wfsat {

/// Release-free constraint obtained by restricting a WeightedConstraint to
/// one of its subscopes. Its violation magnitude depends only on how many
/// distinct users the plan puts on `scope`.
struct ClassicalConstraint {
    ConstraintKind kind = ConstraintKind::sod;
    ElementMask scope = 0;
    std::size_t k = 0;
    /// Constant violation that no extension can avoid (at_least with more
    /// required users than exist).
    std::size_t floor = 0;
    std::int64_t weight = 1;
    std::string origin;
    std::size_t subscope = 0;

    std::size_t magnitude(std::size_t distinct_users) const noexcept;
};

/// Blocks of steps sharing a user, in restricted-growth order (block i is
/// opened by the first step, in element order, not in blocks 0..i-1).
struct Partition {
    std::vector<ElementMask> blocks;

    bool operator==(const Partition&) const = default;
};

struct CostedPlan {
    Plan plan;
    std::int64_t constraint_weight = 0;
    std::int64_t authorization_weight = 0;
    std::int64_t total = 0;
};

/// Classical constraints for `c` in `arrangement`: one per non-empty
/// subscope between consecutive release points of `c`, vacuous ones
/// dropped. Release points of `c` missing from the arrangement are ignored.
std::vector<ClassicalConstraint> decompose_constraint(const WeightedConstraint& c, const Arrangement& arrangement,
                                                      std::size_t user_count);

std::int64_t pattern_constraint_weight(const Partition& partition, std::span<const ClassicalConstraint> constraints);

struct BlockAssignment {
    std::int64_t cost = 0;
    /// users[i] serves partition block i.
    std::vector<UserIndex> users;
};

/// Cheapest injective block -> user map under per-step unauthorized
/// penalties; among optimal maps the lexicographically smallest user vector.
/// Throws TooManyBlocks when blocks outnumber users.
BlockAssignment min_auth_weight(const Partition& partition, const Schema& schema);

struct SolveStats {
    std::uint64_t partitions_visited = 0;
};

/// Minimum-weight plan over `steps` by enumerating every partition with at
/// most |U| blocks. Constraint scopes must lie within `steps`.
CostedPlan solve_vwsp(ElementMask steps, std::span<const ClassicalConstraint> constraints, const Schema& schema,
                      SolveStats* stats = nullptr);

/// Memo of component solutions for a single schema, keyed by component step
/// set and canonical constraint list. Safe for concurrent use.
class SolveCache {
public:
    bool lookup(const std::string& key, CostedPlan& out) const;
    void store(const std::string& key, const CostedPlan& value);
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::unordered_map<std::string, CostedPlan> entries_;
};

/// Minimum total cost of any plan for the steps of `arrangement`. The
/// decomposed constraints split the steps into independent components that
/// are solved (and cached) separately.
CostedPlan min_cost_arrangement(const Arrangement& arrangement, const Schema& schema, SolveCache* cache = nullptr,
                                SolveStats* stats = nullptr);

} // namespace wfsat
