#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wienerlab {

/// Grammar, whitespace ignored:
///   poly   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor (['*'] factor)*
///   factor := integer ['^' integer] | 'x' ['^' integer]
/// e.g. "x^2+4", "3*x - 1", "2x^3 + x", "-x+7". The Unicode minus sign is
/// accepted as '-'. Returns ascending coefficients with trailing zeros removed
/// ({0} for the zero polynomial). std::invalid_argument on syntax errors,
/// std::overflow_error when a coefficient leaves 64 bits.
std::vector<std::int64_t> parse_polynomial(std::string_view text);

/// Inverse of parse_polynomial, highest power first: "x^2 + 4".
std::string format_polynomial(const std::vector<std::int64_t>& coeffs);

}  // namespace wienerlab
