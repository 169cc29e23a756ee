#include "butterfly/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace butterfly {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void validate_frequency(std::int64_t p, std::int64_t q) {
  if (q < 1) throw std::invalid_argument("eigensolver: q must be >= 1");
  if (p < 0 || p > q) throw std::invalid_argument("eigensolver: need 0 <= p <= q");
  if (std::gcd(p, q) != 1) throw std::invalid_argument("eigensolver: p/q must be reduced");
}

// Number of eigenvalues of the tridiagonal (diag, sub) strictly below x.
std::size_t sturm_count(const std::vector<double>& diag, const std::vector<double>& sub2,
                        double x, double pivmin) {
  std::size_t count = 0;
  double d = diag[0] - x;
  if (std::abs(d) < pivmin) d = -pivmin;
  if (d < 0) ++count;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    d = (diag[i] - x) - sub2[i - 1] / d;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0) ++count;
  }
  return count;
}

// In-place Householder reduction of a dense symmetric matrix (row-major).
void householder_tridiagonalize(std::vector<double>& a, std::size_t n, std::vector<double>& diag,
                                std::vector<double>& sub) {
  diag.assign(n, 0.0);
  sub.assign(n > 0 ? n - 1 : 0, 0.0);
  std::vector<double> v(n), p(n), w(n);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) norm2 += at(k + 1 + i, k) * at(k + 1 + i, k);
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) {
      sub[k] = 0.0;
      continue;
    }
    const double x0 = at(k + 1, k);
    const double alpha = x0 >= 0 ? -norm : norm;
    for (std::size_t i = 0; i < m; ++i) v[i] = at(k + 1 + i, k);
    v[0] -= alpha;
    double vnorm = 0.0;
    for (std::size_t i = 0; i < m; ++i) vnorm += v[i] * v[i];
    vnorm = std::sqrt(vnorm);
    for (std::size_t i = 0; i < m; ++i) v[i] /= vnorm;

    double kappa = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) acc += at(k + 1 + i, k + 1 + j) * v[j];
      p[i] = acc;
      kappa += v[i] * acc;
    }
    for (std::size_t i = 0; i < m; ++i) w[i] = p[i] - kappa * v[i];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        at(k + 1 + i, k + 1 + j) -= 2.0 * (v[i] * w[j] + w[i] * v[j]);

    sub[k] = alpha;
  }
  for (std::size_t i = 0; i < n; ++i) diag[i] = at(i, i);
  if (n >= 2) sub[n - 2] = at(n - 1, n - 2);
}

}  // namespace

std::vector<double> PeriodicTridiagonal::dense() const {
  const std::size_t n = size();
  std::vector<double> a(n * n, 0.0);
  if (n == 0) return a;
  if (n == 1) {
    a[0] = diag[0] + 2.0 * corner;
    return a;
  }
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] = diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    a[i * n + i + 1] = offdiag;
    a[(i + 1) * n + i] = offdiag;
  }
  a[n - 1] += corner;
  a[(n - 1) * n] += corner;
  return a;
}

PeriodicTridiagonal build_extreme_matrix(std::int64_t p, std::int64_t q, double lambda,
                                         Extreme extreme) {
  validate_frequency(p, q);
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("eigensolver: lambda must be positive and finite");

  PeriodicTridiagonal m;
  m.diag.resize(static_cast<std::size_t>(q));
  const double phase = extreme == Extreme::Max ? 0.0 : std::numbers::pi / static_cast<double>(q);
  for (std::int64_t k = 0; k < q; ++k) {
    // Reduce p*k mod q first so the cosine argument stays in [0, 2 pi).
    const double frac = static_cast<double>((p * k) % q) / static_cast<double>(q);
    m.diag[static_cast<std::size_t>(k)] = lambda * std::cos(2.0 * std::numbers::pi * frac + phase);
  }
  m.corner = extreme == Extreme::Max ? 1 : -1;
  return m;
}

std::vector<double> tridiagonal_eigenvalues(const std::vector<double>& diag,
                                            const std::vector<double>& sub) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (sub.size() + 1 != n) throw std::invalid_argument("tridiagonal: sub-diagonal size mismatch");

  std::vector<double> sub2(sub.size());
  double gl = std::numeric_limits<double>::infinity();
  double gu = -gl;
  double max_sub2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? std::abs(sub[i - 1]) : 0.0;
    const double right = i + 1 < n ? std::abs(sub[i]) : 0.0;
    gl = std::min(gl, diag[i] - left - right);
    gu = std::max(gu, diag[i] + left + right);
    if (i + 1 < n) {
      sub2[i] = sub[i] * sub[i];
      max_sub2 = std::max(max_sub2, sub2[i]);
    }
  }
  const double span = std::max(std::abs(gl), std::abs(gu));
  const double pivmin = std::max(std::numeric_limits<double>::min(),
                                 std::numeric_limits<double>::min() * max_sub2);
  gl -= 2.0 * kEps * span * static_cast<double>(n) + pivmin;
  gu += 2.0 * kEps * span * static_cast<double>(n) + pivmin;

  std::vector<double> values(n);
  double lower_hint = gl;
  for (std::size_t k = 0; k < n; ++k) {
    double lo = lower_hint;
    double hi = gu;
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (sturm_count(diag, sub2, mid, pivmin) > k)
        hi = mid;
      else
        lo = mid;
    }
    // Zero pivots count as negative, so count(x) includes eigenvalues equal to
    // x and the eigenvalue lies in (lo, hi].
    values[k] = hi;
    lower_hint = lo;
  }
  std::sort(values.begin(), values.end());
  return values;
}

EigenList eigenvalues(const PeriodicTridiagonal& m, double rel_tolerance) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("eigensolver: empty matrix");
  if (m.corner != 1 && m.corner != -1) throw std::invalid_argument("eigensolver: corner must be +-1");
  for (double d : m.diag)
    if (!std::isfinite(d)) throw std::invalid_argument("eigensolver: non-finite diagonal");

  std::vector<double> a = m.dense();
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(a[i * n + j]);
    norm = std::max(norm, row);
  }

  std::vector<double> diag, sub;
  householder_tridiagonalize(a, n, diag, sub);

  EigenList out;
  out.values = tridiagonal_eigenvalues(diag, sub);
  for (double v : out.values)
    if (!std::isfinite(v)) throw ConvergenceError("eigensolver: non-finite eigenvalue");

  // Backward error of the reduction plus the bisection interval width.
  const double dn = static_cast<double>(n);
  out.residual_bound = (4.0 * dn + 8.0) * kEps * norm;
  const double radius =
      std::max(std::abs(out.values.front()), std::abs(out.values.back()));
  if (out.residual_bound > rel_tolerance * radius)
    throw ConvergenceError("eigensolver: error bound " + std::to_string(out.residual_bound) +
                           " exceeds tolerance at order " + std::to_string(n));
  return out;
}

double chambers_invariance_check(std::int64_t p, std::int64_t q, double lambda, int trials,
                                 std::uint64_t rng_seed) {
  validate_frequency(p, q);
  if (q > kInvarianceOracleMaxQ)
    throw std::invalid_argument("chambers check: q exceeds oracle bound " +
                                std::to_string(kInvarianceOracleMaxQ));
  if (trials < 1) throw std::invalid_argument("chambers check: trials must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("chambers check: lambda must be positive");

  using cplx = std::complex<double>;
  const auto n = static_cast<std::size_t>(q);
  const double half = lambda / 2.0;
  const double two_pi = 2.0 * std::numbers::pi;
  const std::vector<double> samples{-3.7, -2.3, -0.9, 0.35, 1.3, 2.9};

  auto hermitian = [&](cplx z1, cplx z2) {
    std::vector<cplx> h(n * n, cplx{});
    // U e_k = e_{k+1 mod q}; V = diag(omega^k).
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t next = (k + 1) % n;
      h[next * n + k] += z1;
      h[k * n + next] += std::conj(z1);
      const double frac = static_cast<double>((p * static_cast<std::int64_t>(k)) % q) /
                          static_cast<double>(q);
      const cplx omega = std::polar(1.0, two_pi * frac);
      h[k * n + k] += half * (z2 * omega + std::conj(z2 * omega));
    }
    return h;
  };

  // det(xI - H) by LU with partial pivoting.
  auto char_poly = [&](const std::vector<cplx>& h, double x) {
    std::vector<cplx> a(n * n);
    for (std::size_t i = 0; i < n * n; ++i) a[i] = -h[i];
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] += x;
    cplx det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < n; ++r)
        if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
      if (std::abs(a[piv * n + c]) == 0.0) return cplx{};
      if (piv != c) {
        for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
        det = -det;
      }
      det *= a[c * n + c];
      for (std::size_t r = c + 1; r < n; ++r) {
        const cplx f = a[r * n + c] / a[c * n + c];
        for (std::size_t j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
      }
    }
    return det;
  };

  auto constant_term = [&](cplx z1, cplx z2) {
    const double qd = static_cast<double>(q);
    return 2.0 * std::pow(z1, qd).real() + 2.0 * std::pow(half, qd) * std::pow(z2, qd).real();
  };

  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> angle(0.0, two_pi);

  std::vector<cplx> reference(samples.size());
  {
    const auto h = hermitian(1.0, 1.0);
    for (std::size_t i = 0; i < samples.size(); ++i)
      reference[i] = char_poly(h, samples[i]) + constant_term(1.0, 1.0);
  }

  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const cplx z1 = std::polar(1.0, angle(rng));
    const cplx z2 = std::polar(1.0, angle(rng));
    const auto h = hermitian(z1, z2);
    const double c = constant_term(z1, z2);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const cplx value = char_poly(h, samples[i]) + c;
      const double scale = std::max(1.0, std::abs(reference[i]));
      worst = std::max(worst, std::abs(value - reference[i]) / scale);
    }
  }
  return worst;
}

}  // namespace butterfly
