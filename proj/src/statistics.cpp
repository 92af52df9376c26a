#include "ellgof/statistics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ellgof/errors.hpp"

namespace ellgof {

namespace {

inline double sq_dist(const double* a, const double* b, int p) {
  double s = 0.0;
  for (int j = 0; j < p; ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

template <typename Psi>
double within_sum_impl(const Sample& x, Psi psi) {
  detail::CompensatedSum acc;
  const int p = x.p;
  for (int j = 0; j < x.n - 1; ++j) {
    const double* rj = x.data.data() + static_cast<std::size_t>(j) * p;
    for (int k = j + 1; k < x.n; ++k) {
      const double* rk = x.data.data() + static_cast<std::size_t>(k) * p;
      acc.add(psi(sq_dist(rj, rk, p)));
    }
  }
  return acc.value();
}

template <typename Psi>
double cross_sum_impl(const Sample& x, const Sample& y, Psi psi) {
  detail::CompensatedSum acc;
  const int p = x.p;
  for (int j = 0; j < x.n; ++j) {
    const double* rj = x.data.data() + static_cast<std::size_t>(j) * p;
    for (int k = 0; k < y.n; ++k) {
      const double* rk = y.data.data() + static_cast<std::size_t>(k) * p;
      acc.add(psi(sq_dist(rj, rk, p)));
    }
  }
  return acc.value();
}

template <typename F>
double dispatch_kernel(const WeightKernel& k, F&& f) {
  switch (k.family) {
    case WeightKernel::Family::gaussian:
      return f([](double xi) { return std::exp(-0.5 * xi); });
    case WeightKernel::Family::stable: {
      const double half_b = 0.5 * k.b;
      return f([half_b](double xi) { return std::exp(-std::pow(xi, half_b)); });
    }
    case WeightKernel::Family::gen_laplace: {
      const double b = k.b;
      return f([b](double xi) { return std::pow(1.0 + xi, -b); });
    }
  }
  throw config_error("unknown weight kernel");
}

void check_pair_shapes(const Sample& x, const Sample& x0) {
  if (x.n != x0.n || x.p != x0.p) {
    throw std::invalid_argument("two-sample statistic: samples must share n and p (got " +
                                std::to_string(x.n) + "x" + std::to_string(x.p) + " vs " +
                                std::to_string(x0.n) + "x" + std::to_string(x0.p) + ")");
  }
  if (x.n < 2) throw std::domain_error("two-sample statistic requires n >= 2");
}

}  // namespace

double psi_within_sum(const Sample& x, const WeightKernel& k) {
  return dispatch_kernel(k, [&](auto psi) { return within_sum_impl(x, psi); });
}

double psi_cross_sum(const Sample& x, const Sample& y, const WeightKernel& k) {
  if (x.p != y.p) throw std::invalid_argument("psi_cross_sum: dimension mismatch");
  return dispatch_kernel(k, [&](auto psi) { return cross_sum_impl(x, y, psi); });
}

double t_psi_from_sums(double within_x, double within_x0, double cross, int n) {
  return 2.0 / (n - 1.0) * (within_x + within_x0 - cross);
}

StatValue t_psi_simple(const Sample& x, const Sample& x0, const WeightKernel& k) {
  check_pair_shapes(x, x0);
  const double wx = psi_within_sum(x, k);
  const double wx0 = psi_within_sum(x0, k);
  const double cross = psi_cross_sum(x, x0, k);
  return StatValue{t_psi_from_sums(wx, wx0, cross, x.n), x.n, k};
}

StatValue t_gauss_simple(const Sample& x) {
  if (x.n < 2) throw std::domain_error("t_gauss_simple requires n >= 2");
  const WeightKernel gauss = WeightKernel::gaussian();
  const double within = psi_within_sum(x, gauss);
  detail::CompensatedSum singles;
  for (int j = 0; j < x.n; ++j) {
    const auto r = x.row(j);
    double norm2 = 0.0;
    for (double v : r) norm2 += v * v;
    singles.add(std::exp(-0.25 * norm2));
  }
  const double value = 2.0 / (x.n - 1.0) * within +
                       x.n * std::pow(3.0, -0.5 * x.p) -
                       std::pow(2.0, 1.0 - 0.5 * x.p) * singles.value();
  return StatValue{value, x.n, gauss};
}

StatValue t_psi_composite(const Sample& x, const Sample& x0, const ThetaHat& th,
                          const WeightKernel& k) {
  return t_psi_simple(standardize(x, th), x0, k);
}

StatValue bhep_composite(const Sample& x, double beta) {
  if (!(beta > 0.0)) throw std::domain_error("bhep_composite requires beta > 0");
  if (x.n < 2) throw std::domain_error("bhep_composite requires n >= 2");
  const FamilySpec normal = FamilySpec::standard(Family::normal, x.p);
  const Sample y = standardize(x, moment_estimate(x, normal));

  const double b2 = beta * beta;
  detail::CompensatedSum pair_acc;
  for (int j = 0; j < y.n - 1; ++j) {
    const double* rj = y.data.data() + static_cast<std::size_t>(j) * y.p;
    for (int k = j + 1; k < y.n; ++k) {
      const double* rk = y.data.data() + static_cast<std::size_t>(k) * y.p;
      pair_acc.add(std::exp(-0.5 * b2 * sq_dist(rj, rk, y.p)));
    }
  }
  detail::CompensatedSum singles;
  const double single_rate = 0.5 * b2 / (1.0 + b2);
  for (int j = 0; j < y.n; ++j) {
    const auto r = y.row(j);
    double norm2 = 0.0;
    for (double v : r) norm2 += v * v;
    singles.add(std::exp(-single_rate * norm2));
  }
  // Full n x n pair sum = n diagonal terms (each 1) + twice the j < k sum.
  const double full_pairs = x.n + 2.0 * pair_acc.value();
  const double value = full_pairs / x.n -
                       2.0 * std::pow(1.0 + b2, -0.5 * x.p) * singles.value() +
                       x.n * std::pow(1.0 + 2.0 * b2, -0.5 * x.p);
  return StatValue{value, x.n, WeightKernel::gaussian()};
}

T2Estimate t2_integral_oracle(const Sample& x_std, const Sample& x0,
                              const WeightKernel& k, int n_mc, RngStream& rng) {
  check_pair_shapes(x_std, x0);
  if (n_mc < 100) {
    throw std::invalid_argument("t2_integral_oracle: n_mc below 100 is refused");
  }
  const int n = x_std.n;
  const int p = x_std.p;

  const bool stable = k.family == WeightKernel::Family::stable;
  const bool glaplace = k.family == WeightKernel::Family::gen_laplace;
  const double stable_index = stable ? 0.5 * k.b : 0.0;

  std::vector<double> t(p);
  detail::CompensatedSum sum;
  detail::CompensatedSum sum_sq;
  for (int it = 0; it < n_mc; ++it) {
    double scale = 1.0;
    if (stable) {
      scale = std::sqrt(2.0 * rng.next_positive_stable(stable_index));
    } else if (glaplace) {
      scale = std::sqrt(2.0 * rng.next_gamma(k.b));
    }
    for (int j = 0; j < p; ++j) t[j] = scale * rng.next_normal();

    // Accumulate per-row cosine/sine differences so that coinciding samples
    // cancel exactly term by term.
    double dc = 0.0, ds = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto rx = x_std.row(i);
      const auto r0 = x0.row(i);
      double dot_x = 0.0, dot_0 = 0.0;
      for (int j = 0; j < p; ++j) {
        dot_x += t[j] * rx[j];
        dot_0 += t[j] * r0[j];
      }
      dc += std::cos(dot_x) - std::cos(dot_0);
      ds += std::sin(dot_x) - std::sin(dot_0);
    }
    // n |phi_n(t) - phi_0n(t)|^2 with the 1/n ecf factors pulled together.
    const double y = (dc * dc + ds * ds) / n;
    sum.add(y);
    sum_sq.add(y * y);
  }
  const double mean = sum.value() / n_mc;
  const double var = std::max(0.0, sum_sq.value() / n_mc - mean * mean);
  T2Estimate est;
  est.value = mean;
  est.std_error = std::sqrt(var / n_mc);
  return est;
}

}  // namespace ellgof
