#pragma once

#include "wfsat/error.hpp"
#include "wfsat/model.hpp"

#include <string>
#include <string_view>

namespace wfsat {

/// A well-formed document whose content breaks schema invariants.
class SemanticError : public Error {
public:
    explicit SemanticError(ValidationReport report)
        : Error("invalid schema: " + report.to_string()), report_(std::move(report))
    {
    }

    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

/// Parses the JSON instance format. N-ary compositions are left-folded;
/// user order is file order. The result has passed validate_schema.
///
/// Throws SyntaxError (JSON syntax or document shape, with a byte offset or
/// JSON pointer) and SemanticError (unknown or duplicate ids, arity, ranges).
Schema parse_ccws(std::string_view text);

/// Reads and parses a file; I/O failures surface as SyntaxError.
Schema load_ccws(const std::string& path);

/// Canonical serialization: sorted object keys, two-space indentation,
/// maximal n-ary runs of each composition kind, ids in element order.
std::string write_ccws(const Schema& schema);

/// Graphviz rendering with the orchestration vertices re-materialized:
/// a global input/output pair plus a fork/join pair per parallel or xor
/// branching. Steps are boxes, release points circles, orchestration
/// points borderless.
std::string export_dot(const CompositionNode& root);

} // namespace wfsat
