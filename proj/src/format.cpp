#include "butterfly/format.hpp"

#include <array>
#include <charconv>
#include <stdexcept>
#include <system_error>

namespace butterfly {

namespace {

std::string to_chars_or_throw(double value, std::chars_format fmt, int precision) {
  std::array<char, 64> buf{};
  auto res = precision < 0 ? std::to_chars(buf.data(), buf.data() + buf.size(), value, fmt)
                           : std::to_chars(buf.data(), buf.data() + buf.size(), value, fmt,
                                           precision);
  if (res.ec != std::errc()) throw std::runtime_error("format: number does not fit buffer");
  return std::string(buf.data(), res.ptr);
}

}  // namespace

std::string format_sci12(double value) {
  if (value == 0.0) value = 0.0;
  return to_chars_or_throw(value, std::chars_format::scientific, 12);
}

std::string format_shortest(double value) {
  if (value == 0.0) value = 0.0;
  return to_chars_or_throw(value, std::chars_format::general, -1);
}

std::string format_ps_number(double value) {
  if (value == 0.0) return "0";
  std::string s = to_chars_or_throw(value, std::chars_format::fixed, -1);
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  else if (s.rfind("-0.", 0) == 0) s.erase(1, 1);
  return s;
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last)
    throw std::invalid_argument("cannot parse number '" + text + "'");
  return v;
}

}  // namespace butterfly
