#pragma once

#include "wfsat/model.hpp"
#include "wfsat/vwsp.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace wfsat::oracle {

// Brute-force reference. Depends on the model only: it has its own
// sequence algebra, derives constraint subscopes straight from each
// sequence, and enumerates every plan and every constraint extension.

using Sequence = std::vector<ElementIndex>;

struct Limits {
    std::size_t sequences = 200'000;
    std::uint64_t plans = 1u << 22;
};

/// Sigma of the workflow, xor branches included, sorted lexicographically.
/// Throws SizeLimit beyond `limit` sequences.
std::vector<Sequence> all_sequences(const CompositionNode& root, const ElementTable& table, std::size_t limit);

/// w(sigma, plan): authorization penalties plus, for every constraint and
/// every non-empty subscope of sigma, weight times the smallest violation
/// of any extension of the plan to the whole scope. `plan` must cover S(sigma).
std::int64_t plan_cost(const Sequence& seq, const Plan& plan, const Schema& schema);

/// Exact minimum over all |U|^|S(sigma)| plans; the witness is the
/// lexicographically first optimal plan (steps in element order).
CostedPlan min_cost_sequence(const Sequence& seq, const Schema& schema, const Limits& limits = {});

struct SequenceClass {
    std::vector<std::size_t> members;  // indices into Report::sequences
    std::int64_t min_cost = 0;
};

struct Report {
    std::vector<Sequence> sequences;
    std::vector<std::int64_t> minimum;  // per sequence
    std::vector<SequenceClass> classes; // grouped by release order, step set and release-right sets
    BigInt total = 0;
    std::int64_t max_cost = 0;
    Rational expected_cost;
    bool strong = false;
    std::optional<BigInt> within_budget;
    std::optional<bool> bounded;
    std::optional<bool> expected;
    std::optional<bool> approx;
};

/// Literal per-sequence evaluation of every decision problem.
Report decide(const Schema& schema, std::optional<Rational> budget, std::optional<Rational> probability,
              const Limits& limits = {});

} // namespace wfsat::oracle
