#pragma once

#include "wfsat/arrangements.hpp"
#include "wfsat/model.hpp"
#include "wfsat/vwsp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wfsat {

struct ArrangementRecord {
    Arrangement arrangement;
    /// Number of execution sequences in the class (a_i).
    BigInt count;
    /// Minimum-cost plan for the class (w_i* = best.total).
    CostedPlan best;
};

/// Per-arrangement results for a whole schema, in canonical order
/// (instance, release permutation, slot vector).
struct Analysis {
    std::vector<XorFreeInstance> instances;
    std::vector<ArrangementRecord> records;
    BigInt total_sequences;
    double enumerate_seconds = 0;
    double solve_seconds = 0;
};

/// Runs xor elimination, arrangement enumeration and one Valued WSP per
/// arrangement. `jobs` workers solve arrangements (0 = hardware
/// concurrency); the result does not depend on `jobs`.
Analysis analyze(const Schema& schema, unsigned jobs = 0);

std::int64_t max_cost(const Analysis& analysis);
/// Sequence-weighted mean of the per-arrangement minima.
Rational expected_cost(const Analysis& analysis);
/// Number of sequences whose class minimum is within `budget`.
BigInt within_budget(const Analysis& analysis, const Rational& budget);

/// Throws ZeroWeight if a constraint weight, or the penalty of a step that
/// some user is not authorized for, is zero.
void require_positive_weights(const Schema& schema);

struct StrongSatResult {
    bool satisfiable = false;
    /// First arrangement (record index) without a zero-cost plan.
    std::optional<std::size_t> failing_record;
};

StrongSatResult check_strong_sat(const Schema& schema, const Analysis& analysis);
StrongSatResult check_strong_sat(const Schema& schema, unsigned jobs = 0);

/// Budgets must be non-negative and probabilities in [0, 1]; otherwise
/// std::invalid_argument.
bool check_bounded_cost(const Analysis& analysis, const Rational& budget);
bool check_expected_cost(const Analysis& analysis, const Rational& budget);
bool check_approx(const Analysis& analysis, const Rational& budget, const Rational& probability);

bool check_bounded_cost(const Schema& schema, const Rational& budget, unsigned jobs = 0);
bool check_expected_cost(const Schema& schema, const Rational& budget, unsigned jobs = 0);
bool check_approx(const Schema& schema, const Rational& budget, const Rational& probability, unsigned jobs = 0);

Rational min_budget_bounded(const Analysis& analysis);
Rational min_budget_expected(const Analysis& analysis);

enum class Problem { strong, bounded, expected, approx, solve, min_budget_bounded, min_budget_expected };

std::string_view to_string(Problem problem) noexcept;

/// Everything a report needs: the analysis plus the decision for one
/// problem. Aggregates are always filled; `within_budget` needs a budget.
struct DecisionReport {
    Problem problem = Problem::solve;
    std::optional<bool> answer;
    std::optional<Rational> budget;
    std::optional<Rational> probability;
    std::optional<std::size_t> failing_record;
    std::optional<Rational> min_budget;
    Analysis analysis;
    std::int64_t max_cost = 0;
    Rational expected_cost;
    std::optional<BigInt> within_budget;
};

/// Budget and probability fall back to the schema's own fields. Throws
/// std::invalid_argument when a problem lacks a required budget/probability.
DecisionReport decide(const Schema& schema, Problem problem, std::optional<Rational> budget = std::nullopt,
                      std::optional<Rational> probability = std::nullopt, unsigned jobs = 0);

} // namespace wfsat
