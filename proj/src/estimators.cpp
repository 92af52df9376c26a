#include "ellgof/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ellgof/errors.hpp"

namespace ellgof {

std::vector<double> sample_mean(const Sample& x) {
  std::vector<double> m(x.p, 0.0);
  for (int i = 0; i < x.n; ++i) {
    const auto r = x.row(i);
    for (int j = 0; j < x.p; ++j) m[j] += r[j];
  }
  for (double& v : m) v /= x.n;
  return m;
}

Mat sample_cov(const Sample& x) {
  const auto mean = sample_mean(x);
  Mat s(x.p, x.p);
  std::vector<double> centered(x.p);
  for (int i = 0; i < x.n; ++i) {
    const auto r = x.row(i);
    for (int j = 0; j < x.p; ++j) centered[j] = r[j] - mean[j];
    for (int j = 0; j < x.p; ++j)
      for (int k = j; k < x.p; ++k) s(j, k) += centered[j] * centered[k];
  }
  for (int j = 0; j < x.p; ++j)
    for (int k = j; k < x.p; ++k) {
      s(j, k) /= x.n;
      s(k, j) = s(j, k);
    }
  return s;
}

double family_scatter_constant(const FamilySpec& family, int p) {
  switch (family.family) {
    case Family::normal:
    case Family::laplace:
      return 1.0;
    case Family::student_t:
      return (family.nu - 2.0) / family.nu;
    case Family::kotz:
      return p / (2.0 * family.N + p - 2.0);
  }
  throw config_error("unknown family");
}

ThetaHat moment_estimate(const Sample& x, const FamilySpec& family) {
  if (x.n < 1 || x.p < 1) {
    throw std::invalid_argument("moment_estimate requires a nonempty sample");
  }
  auto mean = sample_mean(x);
  Mat s = sample_cov(x);
  const double c = family_scatter_constant(family, x.p);
  for (int i = 0; i < x.p; ++i)
    for (int j = 0; j < x.p; ++j) s(i, j) *= c;
  SymPosDef v_hat = [&]() {
    try {
      return SymPosDef(std::move(s));
    } catch (const numeric_error& e) {
      throw numeric_error(std::string("moment_estimate: singular sample covariance (") +
                          e.what() + ")");
    }
  }();
  if (v_hat.min_eigenvalue() < 1e-12) {
    throw numeric_error("moment_estimate: scatter estimate is near-singular (min eigenvalue " +
                        std::to_string(v_hat.min_eigenvalue()) + ")");
  }
  return ThetaHat{std::move(mean), std::move(v_hat), family.family};
}

Sample standardize(const Sample& x, const ThetaHat& th) {
  if (static_cast<int>(th.delta_hat.size()) != x.p) {
    throw std::invalid_argument("standardize: estimate dimension does not match data");
  }
  const Mat root = inv_sqrt(th.v_hat).mat();
  Sample out(x.n, x.p);
  std::vector<double> centered(x.p);
  for (int i = 0; i < x.n; ++i) {
    const auto r = x.row(i);
    for (int j = 0; j < x.p; ++j) centered[j] = r[j] - th.delta_hat[j];
    auto o = out.row(i);
    for (int j = 0; j < x.p; ++j) {
      double s = 0.0;
      for (int k = 0; k < x.p; ++k) s += root(j, k) * centered[k];
      o[j] = s;
    }
  }
  return out;
}

}  // namespace ellgof
