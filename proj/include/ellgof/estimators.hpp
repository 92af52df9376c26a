#pragma once

#include <vector>

#include "ellgof/numerics.hpp"
#include "ellgof/samplers.hpp"

namespace ellgof {

/// Moment estimate of (location, scatter) for a null family.
struct ThetaHat {
  std::vector<double> delta_hat;
  SymPosDef v_hat;
  Family family;
};

std::vector<double> sample_mean(const Sample& x);

/// Sample covariance with divisor n.
Mat sample_cov(const Sample& x);

/// Moment estimators: delta_hat is the sample mean and v_hat = c * S_n with
/// the family constant c (normal and Laplace: 1; student-t: (nu-2)/nu;
/// kotz: p/(2N+p-2)). n >= p + 1 is needed for S_n to be invertible with
/// probability one; a singular or numerically near-singular scatter
/// (smallest eigenvalue below 1e-12) raises numeric_error, with no
/// regularization fallback.
ThetaHat moment_estimate(const Sample& x, const FamilySpec& family);

/// Scatter scale constant relating covariance to scatter for the family.
double family_scatter_constant(const FamilySpec& family, int p);

/// Standardized observations v_hat^(-1/2) (X_j - delta_hat), using the
/// unique symmetric inverse square root.
Sample standardize(const Sample& x, const ThetaHat& th);

}  // namespace ellgof
