#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace butterfly {

// Raised when the eigensolver cannot certify its accuracy bound.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Extreme { Max, Min };

// Real symmetric q x q matrix: diagonal `diag`, unit off-diagonals and a
// wrap-around coupling `corner` between sites 0 and q-1. For q = 1 both
// wraps land on the diagonal (d + 2c); for q = 2 the wrap adds to the
// off-diagonal (1 + c).
struct PeriodicTridiagonal {
  std::vector<double> diag;
  double offdiag = 1.0;
  int corner = 1;

  std::size_t size() const { return diag.size(); }

  // Row-major dense expansion with the small-q wrap rules applied.
  std::vector<double> dense() const;
};

struct EigenList {
  std::vector<double> values;  // ascending
  double residual_bound = 0.0;
};

inline constexpr double kDefaultRelativeTolerance = 1e-10;

// Gauge-reduced representation matrix at the extreme Chambers constant.
// Max: z1 = z2 = 1. Min: z1 = z2 = exp(i pi / q), whose phases collapse
// onto a corner of -1.
PeriodicTridiagonal build_extreme_matrix(std::int64_t p, std::int64_t q, double lambda,
                                         Extreme extreme);

// All eigenvalues, ascending. Householder reduction to tridiagonal form,
// then Sturm-count bisection. Throws ConvergenceError if the error bound
// exceeds rel_tolerance * spectral radius.
EigenList eigenvalues(const PeriodicTridiagonal& m,
                      double rel_tolerance = kDefaultRelativeTolerance);

// Eigenvalues of a symmetric tridiagonal matrix (diag, sub-diagonal) by
// bisection. Exposed for the reduction step and for testing.
std::vector<double> tridiagonal_eigenvalues(const std::vector<double>& diag,
                                            const std::vector<double>& sub);

inline constexpr std::int64_t kInvarianceOracleMaxQ = 64;

// Builds the full Hermitian matrix z1 U + conj(z1) U* + (lambda/2)(z2 V + conj(z2) V*)
// for `trials` random unit-modulus (z1, z2) and returns the largest spread of
// det(xI - H) + z1^q + z1^-q + (lambda/2)^q (z2^q + z2^-q) over the trials,
// at a fixed set of sample energies x, relative to max(1, |reference|).
double chambers_invariance_check(std::int64_t p, std::int64_t q, double lambda, int trials,
                                 std::uint64_t rng_seed);

}  // namespace butterfly
