#include "ellgof/samplers.hpp"

#include <cmath>
#include <stdexcept>

#include "ellgof/errors.hpp"

namespace ellgof {

bool Sample::all_finite() const {
  for (double v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::normal:
      return "normal";
    case Family::laplace:
      return "laplace";
    case Family::student_t:
      return "studentt";
    case Family::kotz:
      return "kotz";
  }
  return "?";
}

FamilySpec::FamilySpec(Family f, std::vector<double> delta_, SymPosDef v, double hyper)
    : family(f), delta(std::move(delta_)), V(std::move(v)) {
  if (static_cast<int>(delta.size()) != V.dim()) {
    throw config_error("FamilySpec: location and scatter dimensions differ");
  }
  switch (family) {
    case Family::student_t:
      if (!(hyper > 2.0)) throw config_error("student-t family requires nu > 2");
      nu = hyper;
      break;
    case Family::kotz:
      if (!(hyper >= 1.0)) throw config_error("kotz family requires N >= 1");
      N = hyper;
      break;
    default:
      break;
  }
}

FamilySpec FamilySpec::standard(Family f, int p, double hyper) {
  return FamilySpec(f, std::vector<double>(p, 0.0), SymPosDef::identity(p), hyper);
}

std::vector<double> sample_unit_sphere(int p, RngStream& rng) {
  if (p < 1) throw std::domain_error("sample_unit_sphere requires p >= 1");
  if (p == 1) return {rng.next_normal() < 0.0 ? -1.0 : 1.0};
  std::vector<double> u(p);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (int i = 0; i < p; ++i) {
      u[i] = rng.next_normal();
      norm2 += u[i] * u[i];
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (int i = 0; i < p; ++i) u[i] *= inv;
  return u;
}

namespace {

/// In-place affine map x -> delta + V^(1/2) x applied to every row.
/// Skipped entirely for the standard (0, I) member.
void affine_push_forward(Sample& x, std::span<const double> delta, const SymPosDef& V) {
  const int p = x.p;
  bool identity = true;
  for (int i = 0; i < p && identity; ++i)
    for (int j = 0; j < p; ++j)
      if (V(i, j) != (i == j ? 1.0 : 0.0)) {
        identity = false;
        break;
      }
  bool zero_delta = true;
  for (double d : delta)
    if (d != 0.0) zero_delta = false;
  if (identity && zero_delta) return;

  std::vector<double> tmp(p);
  if (identity) {
    for (int i = 0; i < x.n; ++i) {
      auto r = x.row(i);
      for (int j = 0; j < p; ++j) r[j] += delta[j];
    }
    return;
  }
  const Mat root = spd_sqrt(V).mat();
  for (int i = 0; i < x.n; ++i) {
    auto r = x.row(i);
    for (int j = 0; j < p; ++j) {
      double s = 0.0;
      for (int k = 0; k < p; ++k) s += root(j, k) * r[k];
      tmp[j] = delta[j] + s;
    }
    for (int j = 0; j < p; ++j) r[j] = tmp[j];
  }
}

void check_shape(int n, std::span<const double> delta, const SymPosDef& V) {
  if (n < 1) throw std::domain_error("sample size must be >= 1");
  if (static_cast<int>(delta.size()) != V.dim())
    throw config_error("location and scatter dimensions differ");
}

}  // namespace

Sample sample_scale_mixture_normal(int n, std::span<const double> delta,
                                   const SymPosDef& V,
                                   const std::function<double(RngStream&)>& scale,
                                   RngStream& rng) {
  check_shape(n, delta, V);
  const int p = V.dim();
  Sample x(n, p);
  for (int i = 0; i < n; ++i) {
    const double s = scale(rng);
    auto r = x.row(i);
    for (int j = 0; j < p; ++j) r[j] = s * rng.next_normal();
  }
  affine_push_forward(x, delta, V);
  return x;
}

Sample sample_mvnormal(int n, std::span<const double> delta, const SymPosDef& V,
                       RngStream& rng) {
  check_shape(n, delta, V);
  const int p = V.dim();
  Sample x(n, p);
  for (double& v : x.data) v = rng.next_normal();
  affine_push_forward(x, delta, V);
  return x;
}

Sample sample_mvlaplace(int n, std::span<const double> delta, const SymPosDef& V,
                        RngStream& rng) {
  return sample_scale_mixture_normal(
      n, delta, V, [](RngStream& r) { return std::sqrt(r.next_exponential()); }, rng);
}

Sample sample_mvt(int n, std::span<const double> delta, const SymPosDef& V,
                  double nu, RngStream& rng) {
  if (std::isinf(nu)) return sample_mvnormal(n, delta, V, rng);
  if (!(nu > 0.0)) throw std::domain_error("student-t generation requires nu > 0");
  return sample_scale_mixture_normal(
      n, delta, V,
      [nu](RngStream& r) { return 1.0 / std::sqrt(r.next_chi_squared(nu) / nu); }, rng);
}

Sample sample_kotz(int n, std::span<const double> delta, const SymPosDef& V,
                   double N, RngStream& rng) {
  check_shape(n, delta, V);
  const int p = V.dim();
  const double shape = N + 0.5 * p - 1.0;
  if (!(shape > 0.0)) throw std::domain_error("kotz generation requires N + p/2 - 1 > 0");
  Sample x(n, p);
  for (int i = 0; i < n; ++i) {
    const double r2 = 2.0 * rng.next_gamma(shape);  // Gamma(shape, rate 1/2)
    const double r = std::sqrt(r2);
    const auto u = sample_unit_sphere(p, rng);
    auto row = x.row(i);
    for (int j = 0; j < p; ++j) row[j] = r * u[j];
  }
  affine_push_forward(x, delta, V);
  return x;
}

Sample sample_family(int n, const FamilySpec& spec, RngStream& rng) {
  switch (spec.family) {
    case Family::normal:
      return sample_mvnormal(n, spec.delta, spec.V, rng);
    case Family::laplace:
      return sample_mvlaplace(n, spec.delta, spec.V, rng);
    case Family::student_t:
      return sample_mvt(n, spec.delta, spec.V, spec.nu, rng);
    case Family::kotz:
      return sample_kotz(n, spec.delta, spec.V, spec.N, rng);
  }
  throw config_error("sample_family: unknown family");
}

AltSpec AltSpec::normal_mixture(double theta) {
  return {Kind::normal_mixture, theta, 0.0};
}
AltSpec AltSpec::uniform_cube() { return {Kind::uniform_cube, 0.0, 0.0}; }
AltSpec AltSpec::mar_exp() { return {Kind::mar_exp, 0.0, 0.0}; }
AltSpec AltSpec::laplace_normal_mixture(double theta) {
  if (theta < 0.0 || theta > 1.0)
    throw config_error("laplace-normal mixture weight must lie in [0, 1]");
  return {Kind::laplace_normal_mixture, theta, 0.0};
}
AltSpec AltSpec::skew_t(double theta, double nu) {
  if (!(nu > 0.0)) throw config_error("skew-t requires nu > 0");
  return {Kind::skew_t, theta, nu};
}

Sample sample_alternative(int n, int p, const AltSpec& alt, RngStream& rng) {
  if (n < 1 || p < 1) throw std::domain_error("sample_alternative requires n, p >= 1");
  switch (alt.kind) {
    case AltSpec::Kind::normal_mixture: {
      Sample x(n, p);
      for (int i = 0; i < n; ++i) {
        const bool shifted = rng.next_double() < 0.5;
        auto r = x.row(i);
        for (int j = 0; j < p; ++j)
          r[j] = rng.next_normal() + (shifted ? alt.theta : 0.0);
      }
      return x;
    }
    case AltSpec::Kind::uniform_cube: {
      Sample x(n, p);
      for (double& v : x.data) v = rng.next_open01();
      return x;
    }
    case AltSpec::Kind::mar_exp: {
      Sample x(n, p);
      for (int i = 0; i < n; ++i) {
        auto r = x.row(i);
        for (int j = 0; j < p - 1; ++j) r[j] = rng.next_normal();
        r[p - 1] = rng.next_exponential();
      }
      return x;
    }
    case AltSpec::Kind::laplace_normal_mixture: {
      Sample x(n, p);
      for (int i = 0; i < n; ++i) {
        const bool gaussian = rng.next_double() < alt.theta;
        const double s = gaussian ? 1.0 : std::sqrt(rng.next_exponential());
        auto r = x.row(i);
        for (int j = 0; j < p; ++j) r[j] = s * rng.next_normal();
      }
      return x;
    }
    case AltSpec::Kind::skew_t: {
      const std::vector<double> mu(p, 0.0);
      const std::vector<double> xi(p, alt.theta);
      return sample_skew_t(n, mu, SymPosDef::identity(p), xi, alt.nu, rng);
    }
  }
  throw config_error("sample_alternative: unknown alternative");
}

Sample sample_skew_t(int n, std::span<const double> mu, const SymPosDef& Sigma,
                     std::span<const double> xi, double nu, RngStream& rng) {
  const int p = Sigma.dim();
  if (static_cast<int>(mu.size()) != p || static_cast<int>(xi.size()) != p)
    throw config_error("skew-t: parameter dimensions differ");
  if (!(nu > 0.0) && !std::isinf(nu))
    throw std::domain_error("skew-t requires nu > 0");

  // Rescale Sigma to unit diagonal; the slant acts on that scale.
  std::vector<double> omega(p);
  for (int i = 0; i < p; ++i) omega[i] = std::sqrt(Sigma(i, i));
  Mat obar(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) obar(i, j) = Sigma(i, j) / (omega[i] * omega[j]);

  std::vector<double> obar_xi(p, 0.0);
  for (int i = 0; i < p; ++i) {
    double s = 0.0;
    for (int j = 0; j < p; ++j) s += obar(i, j) * xi[j];
    obar_xi[i] = s;
  }
  double xi_obar_xi = 0.0;
  for (int i = 0; i < p; ++i) xi_obar_xi += xi[i] * obar_xi[i];
  const double denom = std::sqrt(1.0 + xi_obar_xi);
  std::vector<double> delta(p);
  for (int i = 0; i < p; ++i) delta[i] = obar_xi[i] / denom;

  // Joint covariance of (U0, Z0) and its symmetric square root.
  Mat c(p + 1, p + 1);
  c(0, 0) = 1.0;
  for (int i = 0; i < p; ++i) {
    c(0, i + 1) = delta[i];
    c(i + 1, 0) = delta[i];
    for (int j = 0; j < p; ++j) c(i + 1, j + 1) = obar(i, j);
  }
  const Mat root = spd_sqrt(SymPosDef(std::move(c))).mat();

  Sample x(n, p);
  std::vector<double> z(p + 1), v(p + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= p; ++j) z[j] = rng.next_normal();
    for (int j = 0; j <= p; ++j) {
      double s = 0.0;
      for (int k = 0; k <= p; ++k) s += root(j, k) * z[k];
      v[j] = s;
    }
    const double flip = v[0] > 0.0 ? 1.0 : -1.0;
    const double w = std::isinf(nu) ? 1.0 : rng.next_chi_squared(nu) / nu;
    const double radial = 1.0 / std::sqrt(w);
    auto r = x.row(i);
    for (int j = 0; j < p; ++j) r[j] = mu[j] + omega[j] * flip * v[j + 1] * radial;
  }
  return x;
}

}  // namespace ellgof
