#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ellgof/numerics.hpp"
#include "ellgof/rng.hpp"

namespace ellgof {

/// n observations in R^p, row-major.
struct Sample {
  int n = 0;
  int p = 0;
  std::vector<double> data;  // n * p, row-major

  Sample() = default;
  Sample(int n_, int p_) : n(n_), p(p_), data(static_cast<std::size_t>(n_) * p_, 0.0) {}

  std::span<const double> row(int i) const {
    return {data.data() + static_cast<std::size_t>(i) * p, static_cast<std::size_t>(p)};
  }
  std::span<double> row(int i) {
    return {data.data() + static_cast<std::size_t>(i) * p, static_cast<std::size_t>(p)};
  }
  double& at(int i, int j) { return data[static_cast<std::size_t>(i) * p + j]; }
  double at(int i, int j) const { return data[static_cast<std::size_t>(i) * p + j]; }

  bool all_finite() const;
};

enum class Family { normal, laplace, student_t, kotz };

std::string family_name(Family f);

/// An elliptical null family together with its fixed hyperparameter and
/// the (location, scatter) pair. Student-t requires nu > 2 (moment
/// estimation needs finite second moments); Kotz uses the s = 1, r = 1/2
/// convention and requires N >= 1.
struct FamilySpec {
  Family family = Family::normal;
  double nu = 0.0;  // student_t only
  double N = 0.0;   // kotz only
  std::vector<double> delta;
  SymPosDef V;

  FamilySpec(Family f, std::vector<double> delta_, SymPosDef v, double hyper = 0.0);

  /// Standard member (delta = 0, V = I) in dimension p.
  static FamilySpec standard(Family f, int p, double hyper = 0.0);

  int dim() const { return static_cast<int>(delta.size()); }
};

/// Uniform draw from the unit sphere in R^p (p = 1 gives -1/+1).
std::vector<double> sample_unit_sphere(int p, RngStream& rng);

/// Scale mixture of normals: rows are delta + s * V^(1/2) Z with Z standard
/// normal and s = scale(rng) drawn per observation. The scale hook is the
/// seam the Laplace/Student samplers share; tests inject a constant scale
/// to collapse the mixture.
Sample sample_scale_mixture_normal(int n, std::span<const double> delta,
                                   const SymPosDef& V,
                                   const std::function<double(RngStream&)>& scale,
                                   RngStream& rng);

Sample sample_mvnormal(int n, std::span<const double> delta, const SymPosDef& V,
                       RngStream& rng);

/// Multivariate Laplace with mean delta and covariance V, generated as
/// delta + sqrt(W) V^(1/2) Z with W ~ Exp(1).
Sample sample_mvlaplace(int n, std::span<const double> delta, const SymPosDef& V,
                        RngStream& rng);

/// Multivariate Student-t with location delta, scatter V and nu degrees of
/// freedom: delta + V^(1/2) Z / sqrt(W/nu), W ~ chi^2_nu. Covariance is
/// (nu/(nu-2)) V when nu > 2. nu may be +infinity (normal limit); nu <= 0
/// is a domain error. Generation only requires nu > 0.
Sample sample_mvt(int n, std::span<const double> delta, const SymPosDef& V,
                  double nu, RngStream& rng);

/// Kotz-type (s = 1, r = 1/2): delta + V^(1/2) R U with R^2 ~ Gamma(N + p/2 - 1,
/// rate 1/2) and U uniform on the sphere. Covariance is ((2N+p-2)/p) V.
/// N = 1 recovers the multivariate normal.
Sample sample_kotz(int n, std::span<const double> delta, const SymPosDef& V,
                   double N, RngStream& rng);

/// Draws from the family described by spec.
Sample sample_family(int n, const FamilySpec& spec, RngStream& rng);

/// The alternative data generators used by the power experiments.
struct AltSpec {
  enum class Kind {
    normal_mixture,          // balanced mix of N(0, I) and N(theta*1, I)
    uniform_cube,            // i.i.d. U(0,1) coordinates
    mar_exp,                 // N(0, I) with the p-th coordinate ~ Exp(1)
    laplace_normal_mixture,  // (1-theta) Laplace(0, I) + theta N(0, I)
    skew_t,                  // slant-skewed Student-t
  };

  Kind kind = Kind::normal_mixture;
  double theta = 0.0;  // mixture weight or slant magnitude (xi = theta * 1)
  double nu = 0.0;     // skew_t degrees of freedom

  static AltSpec normal_mixture(double theta);
  static AltSpec uniform_cube();
  static AltSpec mar_exp();
  static AltSpec laplace_normal_mixture(double theta);
  static AltSpec skew_t(double theta, double nu);
};

Sample sample_alternative(int n, int p, const AltSpec& alt, RngStream& rng);

/// Skew-t with location mu, scale Sigma, slant xi and nu degrees of freedom,
/// via the conditioning construction: (U0, Z0) jointly normal with
/// corr(U0, Z0) = delta = Omega_bar xi / sqrt(1 + xi' Omega_bar xi),
/// Z = Z0 sign-flipped when U0 <= 0, X = mu + omega Z / sqrt(W/nu).
/// Here Omega_bar is Sigma rescaled to unit diagonal and omega the diagonal
/// scale; xi acts on the standardized scale (the "direct" slant convention).
Sample sample_skew_t(int n, std::span<const double> mu, const SymPosDef& Sigma,
                     std::span<const double> xi, double nu, RngStream& rng);

}  // namespace ellgof
