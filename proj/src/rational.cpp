#include "wfsat/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace wfsat {

namespace {

BigInt parse_integer(std::string_view text, bool allow_sign)
{
    std::size_t pos = 0;
    bool negative = false;
    if (allow_sign && !text.empty() && text[0] == '-') {
        negative = true;
        pos = 1;
    }
    if (pos == text.size()) {
        throw std::invalid_argument("empty integer");
    }
    BigInt value = 0;
    for (; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw std::invalid_argument("invalid digit in '" + std::string(text) + "'");
        }
        value = value * 10 + (c - '0');
    }
    return negative ? BigInt(-value) : value;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_integer(text, true));
    }
    BigInt num = parse_integer(text.substr(0, slash), true);
    BigInt den = parse_integer(text.substr(slash + 1), false);
    if (den == 0) {
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    }
    return Rational(num, den);
}

std::string format_rational(const Rational& value)
{
    const BigInt num = boost::multiprecision::numerator(value);
    const BigInt den = boost::multiprecision::denominator(value);
    if (den == 1) {
        return num.str();
    }
    return num.str() + "/" + den.str();
}

} // namespace wfsat
