#pragma once

#include <string>
#include <string_view>

namespace ringspice {

// Parse "number [SI suffix] [unit letters]": 1.5k, 100n, 2meg, 0.35u, 1kohm.
// Suffixes: f p n u m k meg g (case-insensitive; "meg" checked before "m").
// Decimal-exact: implemented by exponent rewriting + one strtod call, so
// "100n" yields exactly the double 1e-7. Throws std::invalid_argument.
double parse_value(std::string_view token);

// Shortest decimal representation with an engineering SI suffix where one
// fits; parse_value(format_value(x)) == x bit-exactly.
std::string format_value(double value);

// Shortest plain decimal (no suffix), for CSV output.
std::string format_double(double value);

} // namespace ringspice
