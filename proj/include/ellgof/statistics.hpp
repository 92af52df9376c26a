#pragma once

#include "ellgof/estimators.hpp"
#include "ellgof/numerics.hpp"
#include "ellgof/rng.hpp"
#include "ellgof/samplers.hpp"

namespace ellgof {

namespace detail {

/// Compensated accumulator (two-double Neumaier scheme). The pairwise kernel
/// sums are small differences of large sums near the null, and the summed
/// result must not depend on row order beyond the final rounding.
struct CompensatedSum {
  double hi = 0.0;
  double lo = 0.0;

  void add(double x) {
    const double s = hi + x;
    const double bb = s - hi;
    lo += (hi - (s - bb)) + (x - bb);
    hi = s;
  }

  double value() const { return hi + lo; }
};

}  // namespace detail

struct StatValue {
  double value = 0.0;
  int n = 0;
  WeightKernel kernel;
};

/// Sum of Psi(||x_j - x_k||^2) over unordered pairs j < k.
double psi_within_sum(const Sample& x, const WeightKernel& k);

/// Sum of Psi(||x_j - y_k||^2) over the full n x n grid.
double psi_cross_sum(const Sample& x, const Sample& y, const WeightKernel& k);

/// Assembles the two-sample statistic from precomputed pair sums:
/// (2/(n-1)) * (within_x + within_x0 - cross). Exposed so callers that
/// evaluate many statistics against a fixed first sample can reuse its
/// within-sample sum.
double t_psi_from_sums(double within_x, double within_x0, double cross, int n);

/// Two-sample kernel statistic: exact double-sum evaluation of
///   (2/(n-1)) [ sum_{j<k} Psi(||X_j-X_k||^2) + sum_{j<k} Psi(||X0_j-X0_k||^2) ]
///   - (2/(n-1)) sum_{j,k} Psi(||X_j-X0_k||^2).
/// Both samples must have the same shape with n >= 2. The value is bounded
/// below by -2n/(n-1), attained when the two samples coincide.
StatValue t_psi_simple(const Sample& x, const Sample& x0, const WeightKernel& k);

/// Closed-form Gaussian-weight statistic for the fixed standard normal null:
/// (2/(n-1)) sum_{j<k} e^{-||X_j-X_k||^2/2} + n 3^{-p/2}
/// - 2^{1-p/2} sum_j e^{-||X_j||^2/4}.
StatValue t_gauss_simple(const Sample& x);

/// Composite-hypothesis statistic: t_psi_simple on the standardized data
/// against a sample x0 drawn from the family's standard member.
StatValue t_psi_composite(const Sample& x, const Sample& x0, const ThetaHat& th,
                          const WeightKernel& k);

/// BHEP statistic with weight scale beta; the data are standardized
/// internally with the sample mean and sample covariance (divisor n):
///   n^{-1} sum_{j,k} e^{-b^2||Y_j-Y_k||^2/2}
///   - 2(1+b^2)^{-p/2} sum_j e^{-b^2||Y_j||^2/(2(1+b^2))}
///   + n(1+2b^2)^{-p/2}.
StatValue bhep_composite(const Sample& x, double beta);

/// Monte Carlo estimate of n * integral |phi_n - phi_0n|^2 w, obtained by
/// averaging over draws t ~ w, where w is the density whose characteristic
/// function is Psi(||.||^2):
///   gaussian       -> t ~ N_p(0, I)
///   stable(b)      -> t = sqrt(2 S) Z, S positive stable of index b/2
///   gen_laplace(b) -> t = sqrt(2 G) Z, G ~ Gamma(b, 1)
struct T2Estimate {
  double value = 0.0;      // estimate of the weighted L2 distance times n
  double std_error = 0.0;  // Monte Carlo standard error of `value`

  /// The pairwise statistic this estimates via n/(n-1) * (value - 2).
  double transformed(int n) const { return n / (n - 1.0) * (value - 2.0); }
  double transformed_std_error(int n) const { return n / (n - 1.0) * std_error; }
};

/// x_std is expected to be already standardized; x0 is the null sample.
/// Refuses n_mc < 100 (the estimate would be too noisy to be informative).
T2Estimate t2_integral_oracle(const Sample& x_std, const Sample& x0,
                              const WeightKernel& k, int n_mc, RngStream& rng);

}  // namespace ellgof
