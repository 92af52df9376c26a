#include "ellgof/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ellgof/errors.hpp"

namespace ellgof {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::transposed() const {
  Mat t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Mat::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
  Mat c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Mat operator-(const Mat& a, const Mat& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("matrix difference: shape mismatch");
  Mat c(a.rows_, a.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int j = 0; j < a.cols_; ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

std::vector<double> mat_vec(const Mat& a, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != a.cols())
    throw std::invalid_argument("matrix-vector product: shape mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

namespace {

double off_diagonal_norm(const Mat& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

/// Cyclic Jacobi on a symmetric matrix. Accumulates rotations into Q.
EigenDecomposition jacobi_eigen(Mat a) {
  const int p = a.rows();
  Mat q = Mat::identity(p);
  const double scale = std::max(a.frobenius_norm(), 1e-300);
  constexpr int kMaxSweeps = 100;
  constexpr double kRelTol = 1e-14;

  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= kRelTol * scale) break;
    for (int r = 0; r < p - 1; ++r) {
      for (int s = r + 1; s < p; ++s) {
        const double ars = a(r, s);
        if (ars == 0.0) continue;
        const double arr = a(r, r);
        const double ass = a(s, s);
        const double tau = (ass - arr) / (2.0 * ars);
        const double t = (tau >= 0.0)
                             ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (int k = 0; k < p; ++k) {
          const double akr = a(k, r);
          const double aks = a(k, s);
          a(k, r) = c * akr - sn * aks;
          a(k, s) = sn * akr + c * aks;
        }
        for (int k = 0; k < p; ++k) {
          const double ark = a(r, k);
          const double ask = a(s, k);
          a(r, k) = c * ark - sn * ask;
          a(s, k) = sn * ark + c * ask;
        }
        for (int k = 0; k < p; ++k) {
          const double qkr = q(k, r);
          const double qks = q(k, s);
          q(k, r) = c * qkr - sn * qks;
          q(k, s) = sn * qkr + c * qks;
        }
      }
    }
  }
  if (sweep == kMaxSweeps && off_diagonal_norm(a) > kRelTol * scale) {
    throw numeric_error("jacobi eigendecomposition did not converge after " +
                        std::to_string(kMaxSweeps) + " sweeps");
  }

  EigenDecomposition dec;
  dec.values.resize(p);
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(p);
  for (int i = 0; i < p; ++i) diag[i] = a(i, i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return diag[i] > diag[j]; });
  dec.vectors = Mat(p, p);
  for (int j = 0; j < p; ++j) {
    const int src = order[j];
    dec.values[j] = diag[src];
    int imax = 0;
    double vmax = 0.0;
    for (int i = 0; i < p; ++i) {
      if (std::abs(q(i, src)) > vmax) {
        vmax = std::abs(q(i, src));
        imax = i;
      }
    }
    const double sign = q(imax, src) < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < p; ++i) dec.vectors(i, j) = sign * q(i, src);
  }
  return dec;
}

Mat assemble_from_eigen(const EigenDecomposition& e,
                        const std::vector<double>& values) {
  const int p = e.vectors.rows();
  Mat m(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      double s = 0.0;
      for (int k = 0; k < p; ++k) s += e.vectors(i, k) * values[k] * e.vectors(j, k);
      m(i, j) = s;
      m(j, i) = s;
    }
  }
  return m;
}

}  // namespace

SymPosDef::SymPosDef(Mat m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw std::invalid_argument("SymPosDef requires a square matrix of dimension >= 1");
  }
  if (m.rows() > 64) {
    throw std::invalid_argument("SymPosDef is restricted to dimension <= 64");
  }
  const double scale = std::max(m.frobenius_norm(), 1e-300);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) {
        throw std::invalid_argument("SymPosDef: matrix is not symmetric");
      }
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = avg;
      m(j, i) = avg;
    }
  }
  eig_ = jacobi_eigen(m);
  if (eig_.values.back() <= 0.0) {
    throw numeric_error("SymPosDef: matrix is not positive definite (min eigenvalue " +
                        std::to_string(eig_.values.back()) + ")");
  }
  mat_ = std::move(m);
}

SymPosDef SymPosDef::identity(int p) { return SymPosDef(Mat::identity(p)); }

SymPosDef SymPosDef::diagonal(const std::vector<double>& d) {
  Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return SymPosDef(std::move(m));
}

EigenDecomposition sym_eigen(const SymPosDef& a) { return a.eigen(); }

SymPosDef inv_sqrt(const SymPosDef& a) {
  const auto& e = a.eigen();
  if (e.values.back() < 1e-12) {
    throw numeric_error("inv_sqrt: matrix is near-singular (min eigenvalue " +
                        std::to_string(e.values.back()) + ")");
  }
  std::vector<double> vals(e.values.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = 1.0 / std::sqrt(e.values[i]);
  return SymPosDef(assemble_from_eigen(e, vals));
}

SymPosDef spd_sqrt(const SymPosDef& a) {
  const auto& e = a.eigen();
  std::vector<double> vals(e.values.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = std::sqrt(e.values[i]);
  return SymPosDef(assemble_from_eigen(e, vals));
}

WeightKernel WeightKernel::gaussian() { return {Family::gaussian, 0.0}; }

WeightKernel WeightKernel::stable(double b) {
  if (!(b > 0.0) || b > 2.0) {
    throw config_error("stable kernel requires b in (0, 2]");
  }
  return {Family::stable, b};
}

WeightKernel WeightKernel::gen_laplace(double b) {
  if (!(b > 0.0)) {
    throw config_error("generalized Laplace kernel requires b > 0");
  }
  return {Family::gen_laplace, b};
}

std::string WeightKernel::name() const {
  switch (family) {
    case Family::gaussian:
      return "gauss";
    case Family::stable:
      return "stable:" + std::to_string(b);
    case Family::gen_laplace:
      return "glaplace:" + std::to_string(b);
  }
  return "?";
}

double psi_eval(const WeightKernel& k, double xi) {
  if (xi < 0.0) throw std::domain_error("psi_eval requires xi >= 0");
  switch (k.family) {
    case WeightKernel::Family::gaussian:
      return std::exp(-0.5 * xi);
    case WeightKernel::Family::stable:
      return std::exp(-std::pow(xi, 0.5 * k.b));
    case WeightKernel::Family::gen_laplace:
      return std::pow(1.0 + xi, -k.b);
  }
  return 0.0;
}

}  // namespace ellgof
