#pragma once

#include <string>

namespace butterfly {

// Locale-independent number formatting shared by the text outputs.

// printf "%.12e" equivalent, e.g. -3.876300213013e+00. Negative zero prints as zero.
std::string format_sci12(double value);

// Shortest string that parses back to the same double.
std::string format_shortest(double value);

// Shortest fixed notation with the leading zero dropped for |v| < 1 (".0005", "100").
std::string format_ps_number(double value);

// Strict full-string double parse; throws std::invalid_argument.
double parse_double(const std::string& text);

}  // namespace butterfly
