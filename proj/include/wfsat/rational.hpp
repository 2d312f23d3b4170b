#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace wfsat {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "N" or "N/D" (N, D decimal, D > 0, optional leading '-').
/// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// Canonical text: "N" for integers, "N/D" in lowest terms otherwise.
std::string format_rational(const Rational& value);

} // namespace wfsat
