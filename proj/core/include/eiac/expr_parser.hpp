#pragma once

// Text forms of numbers and frequency-domain expressions used in config files.
//
// Quantities: a decimal number, an optional SI prefix (f p n u µ m k M G) and an
// optional unit (H F Ohm Ω V A W Hz s), e.g. "30m", "6800u", "5uH", "10kHz".
//
// Expressions: + - * / ^ and parentheses over numbers (SI prefixes allowed),
// the Laplace variable s, the constants pi and j, par(a, b, ...) for parallel
// impedances and delay(t) for exp(-s t). Exponents must be integer constants.

#include <string_view>

#include "eiac/freq_expr.hpp"

namespace eiac {

/// Throws InvalidArgument on malformed input.
double parse_quantity(std::string_view text);

/// Throws InvalidArgument on malformed input.
FreqExpr parse_expression(std::string_view text);

} // namespace eiac
