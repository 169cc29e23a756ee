#include "butterfly/rational.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace butterfly {

Rational::Rational(std::int64_t p, std::int64_t q) : p_(p), q_(q) {
  if (q < 1) throw std::invalid_argument("rational: denominator must be >= 1");
  if (p < 0 || p > q) throw std::invalid_argument("rational: need 0 <= p <= q, got " + str());
  if (std::gcd(p, q) != 1) throw std::invalid_argument("rational: " + str() + " is not reduced");
}

Rational Rational::reduced(std::int64_t num, std::int64_t den) {
  if (den < 1) throw std::invalid_argument("rational: denominator must be >= 1");
  const std::int64_t g = std::gcd(num, den);
  return Rational(num / g, den / g);
}

Rational Rational::parse(std::string_view text) {
  auto to_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw std::invalid_argument("rational: cannot parse '" + std::string(text) + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(to_int(text), 1);
  return Rational(to_int(text.substr(0, slash)), to_int(text.substr(slash + 1)));
}

std::string Rational::str() const { return std::to_string(p_) + "/" + std::to_string(q_); }

}  // namespace butterfly
