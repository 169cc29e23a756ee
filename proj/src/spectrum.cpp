#include "butterfly/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <stdexcept>

#include "butterfly/eigensolver.hpp"
#include "butterfly/format.hpp"

namespace butterfly {

namespace {

std::vector<double> compute_edges(const Rational& theta, double lambda) {
  const auto max_vals = eigenvalues(build_extreme_matrix(theta.p(), theta.q(), lambda, Extreme::Max));
  const auto min_vals = eigenvalues(build_extreme_matrix(theta.p(), theta.q(), lambda, Extreme::Min));
  std::vector<double> edges;
  edges.reserve(max_vals.values.size() + min_vals.values.size());
  edges.insert(edges.end(), max_vals.values.begin(), max_vals.values.end());
  edges.insert(edges.end(), min_vals.values.begin(), min_vals.values.end());
  std::sort(edges.begin(), edges.end());
  return edges;
}

}  // namespace

double SpectrumEdges::x(std::int64_t i) const {
  if (i < 1 || i > static_cast<std::int64_t>(edges.size()))
    throw std::out_of_range("edge index " + std::to_string(i) + " outside 1.." +
                            std::to_string(edges.size()) + " at theta " + theta.str());
  return edges[static_cast<std::size_t>(i - 1)];
}

SpectrumEdges band_edges(const Rational& theta, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("band_edges: lambda must be positive and finite");
  return SpectrumEdges{theta, lambda, compute_edges(theta, lambda)};
}

Gap gap(const SpectrumEdges& edges, std::int64_t r) {
  if (r < 1 || r > edges.q() - 1)
    throw std::out_of_range("gap index " + std::to_string(r) + " outside 1.." +
                            std::to_string(edges.q() - 1) + " at theta " + edges.theta.str());
  return Gap{r, edges.x(2 * r), edges.x(2 * r + 1)};
}

std::vector<Rational> farey_enumerate(std::int64_t q_max, const Rational& lo, const Rational& hi) {
  if (q_max < 1) throw std::invalid_argument("farey_enumerate: q_max must be >= 1");
  std::vector<Rational> out;
  if (hi < lo) return out;

  // Smallest member >= lo, then its successor; both by a scan over denominators.
  auto first_at_least = [&](std::int64_t a, std::int64_t b, bool strict) {
    std::int64_t best_p = 1, best_q = 1;  // 1/1 is always a member
    bool found = false;
    for (std::int64_t d = 1; d <= q_max; ++d) {
      // smallest n with n/d >= a/b (or > a/b when strict)
      std::int64_t n = strict ? (a * d) / b + 1 : (a * d + b - 1) / b;
      if (n > d) continue;
      if (!found || n * best_q < best_p * d) {
        best_p = n;
        best_q = d;
        found = true;
      }
    }
    return found ? std::optional<Rational>(Rational::reduced(best_p, best_q)) : std::nullopt;
  };

  auto first = first_at_least(lo.p(), lo.q(), false);
  if (!first || hi < *first) return out;
  out.push_back(*first);
  auto second = first_at_least(first->p(), first->q(), true);
  if (!second || hi < *second) return out;
  out.push_back(*second);

  std::int64_t a = first->p(), b = first->q(), c = second->p(), d = second->q();
  while (!(c == 1 && d == 1)) {
    const std::int64_t k = (q_max + b) / d;
    const std::int64_t e = k * c - a;
    const std::int64_t f = k * d - b;
    const Rational next(e, f);
    if (hi < next) break;
    out.push_back(next);
    a = c;
    b = d;
    c = e;
    d = f;
  }
  return out;
}

std::string edges_csv_row(const SpectrumEdges& edges) {
  std::string row = std::to_string(edges.theta.p()) + "," + std::to_string(edges.theta.q()) +
                    "," + format_shortest(edges.lambda);
  for (double x : edges.edges) {
    row += ',';
    row += format_shortest(x);
  }
  return row;
}

SpectrumCache::SpectrumCache(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("SpectrumCache: lambda must be positive and finite");
}

SpectrumEdges SpectrumCache::get(const Rational& theta) {
  const auto key = std::make_pair(theta.p() % theta.q(), theta.q());
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end())
      return SpectrumEdges{theta, lambda_, *it->second};
  }
  auto computed = std::make_shared<const std::vector<double>>(compute_edges(theta, lambda_));
  std::unique_lock lock(mutex_);
  auto [it, inserted] = entries_.emplace(key, std::move(computed));
  return SpectrumEdges{theta, lambda_, *it->second};
}

std::size_t SpectrumCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

}  // namespace butterfly
