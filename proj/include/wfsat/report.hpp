#pragma once

#include "wfsat/decide.hpp"
#include "wfsat/oracle.hpp"

#include <optional>
#include <string>

namespace wfsat {

// Every report is one JSON object with the keys problem, answer, budget,
// probability, totals {sequences, arrangements, instances} and records,
// plus optional aggregate/min_budget/failing_record/timings. The schema is
// published in docs/report.schema.json. Output is canonical: identical
// inputs give byte-identical text (timings are opt-in).

std::string decision_report_json(const DecisionReport& report, const Schema& schema, bool timings = false);

std::string oracle_report_json(const oracle::Report& report, const Schema& schema, std::string_view problem,
                               std::optional<bool> answer, const std::optional<Rational>& budget,
                               const std::optional<Rational>& probability);

enum class EnumerateWhat { instances, arrangements, sequences };

/// Enumeration without solving. Sequences are listed instance by instance,
/// each instance's sequences in lexicographic element order; SizeLimit
/// applies per instance.
std::string enumerate_report_json(const Schema& schema, EnumerateWhat what, std::size_t limit);

} // namespace wfsat
