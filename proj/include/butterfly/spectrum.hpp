#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "butterfly/rational.hpp"

namespace butterfly {

inline constexpr double kDefaultLambda = 2.0;

// Two edges closer than this are treated as touching bands.
inline constexpr double kTouchingTolerance = 1e-8;

struct Gap {
  std::int64_t r = 0;
  double left = 0.0;   // right edge of band r, x(2r)
  double right = 0.0;  // left edge of band r+1, x(2r+1)

  double width() const { return right > left ? right - left : 0.0; }
  double midpoint() const { return 0.5 * (left + right); }
};

// The 2q band edges of the spectrum at theta = p/q, ascending. Band i is
// [x(2i-1), x(2i)], gap r is (x(2r), x(2r+1)); indices are 1-based.
struct SpectrumEdges {
  Rational theta;
  double lambda = kDefaultLambda;
  std::vector<double> edges;

  std::int64_t q() const { return theta.q(); }
  double x(std::int64_t i) const;
};

SpectrumEdges band_edges(const Rational& theta, double lambda = kDefaultLambda);

// Throws std::out_of_range unless 1 <= r <= q-1.
Gap gap(const SpectrumEdges& edges, std::int64_t r);

// Reduced fractions with denominator <= q_max in [lo, hi], strictly ascending.
std::vector<Rational> farey_enumerate(std::int64_t q_max, const Rational& lo, const Rational& hi);

// One CSV row: p,q,lambda,x1,...,x2q
std::string edges_csv_row(const SpectrumEdges& edges);

// Memoized band_edges, keyed by (p mod q, q, lambda). Safe for concurrent use.
class SpectrumCache {
 public:
  explicit SpectrumCache(double lambda = kDefaultLambda);

  double lambda() const { return lambda_; }
  SpectrumEdges get(const Rational& theta);
  std::size_t size() const;

 private:
  double lambda_;
  mutable std::shared_mutex mutex_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::shared_ptr<const std::vector<double>>>
      entries_;
};

}  // namespace butterfly
