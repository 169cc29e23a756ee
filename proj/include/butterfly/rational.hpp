#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace butterfly {

// Reduced fraction p/q in [0, 1]. Ordering uses exact cross-multiplication.
class Rational {
 public:
  Rational() = default;

  // Throws std::invalid_argument unless gcd(p, q) == 1, q >= 1 and 0 <= p <= q.
  Rational(std::int64_t p, std::int64_t q);

  // Reduces num/den first; den > 0 and 0 <= num <= den still required.
  static Rational reduced(std::int64_t num, std::int64_t den);

  // Accepts "p/q" (or a bare integer 0 / 1).
  static Rational parse(std::string_view text);

  std::int64_t p() const { return p_; }
  std::int64_t q() const { return q_; }
  double value() const { return static_cast<double>(p_) / static_cast<double>(q_); }
  std::string str() const;

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return a.p_ * b.q_ <=> b.p_ * a.q_;
  }

 private:
  std::int64_t p_ = 0;
  std::int64_t q_ = 1;
};

}  // namespace butterfly
