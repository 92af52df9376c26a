#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ellgof {

/// Minimal dense matrix, row-major. Only what the small-p linear algebra
/// below needs; this is not a general linear-algebra layer.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  static Mat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  const double* data() const { return a_.data(); }
  double* data() { return a_.data(); }

  Mat transposed() const;
  double frobenius_norm() const;

  friend Mat operator*(const Mat& a, const Mat& b);
  friend Mat operator-(const Mat& a, const Mat& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

/// Applies a matrix to a vector: y = A x.
std::vector<double> mat_vec(const Mat& a, const std::vector<double>& x);

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Mat vectors;                 // columns are eigenvectors; orthogonal
};

/// Symmetric positive-definite matrix for the small-dimension regime
/// (p <= 64). Construction symmetrizes by averaging with the transpose,
/// rejects inputs that are asymmetric beyond a 1e-12 relative tolerance,
/// and verifies positive definiteness; the eigendecomposition is cached.
class SymPosDef {
 public:
  explicit SymPosDef(Mat m);

  static SymPosDef identity(int p);

  /// Diagonal matrix from the given entries (all must be positive).
  static SymPosDef diagonal(const std::vector<double>& d);

  int dim() const { return mat_.rows(); }
  const Mat& mat() const { return mat_; }
  double operator()(int i, int j) const { return mat_(i, j); }

  const EigenDecomposition& eigen() const { return eig_; }
  double min_eigenvalue() const { return eig_.values.back(); }

 private:
  Mat mat_;
  EigenDecomposition eig_;
};

/// Eigendecomposition of a symmetric positive-definite matrix via cyclic
/// Jacobi rotations. Eigenvalues come back in descending order; each
/// eigenvector's largest-magnitude component is made positive so results
/// are deterministic. Throws numeric_error (with the sweep count) if the
/// off-diagonal mass has not dropped below 1e-14 * ||A||_F after 100 sweeps.
EigenDecomposition sym_eigen(const SymPosDef& a);

/// Unique symmetric positive-definite inverse square root: B with B A B = I.
/// Throws numeric_error when the smallest eigenvalue is below 1e-12 (the
/// standardization it feeds is numerically meaningless past that point).
SymPosDef inv_sqrt(const SymPosDef& a);

/// Unique symmetric positive-definite square root.
SymPosDef spd_sqrt(const SymPosDef& a);

/// Scalar weight kernel Psi defining the weight measure. Members satisfy
/// Psi(0) = 1 and are nonincreasing on [0, inf) with values in (0, 1].
struct WeightKernel {
  enum class Family { gaussian, stable, gen_laplace };

  Family family = Family::gaussian;
  double b = 0.0;  // shape; unused for the gaussian member

  static WeightKernel gaussian();
  static WeightKernel stable(double b);       // requires b in (0, 2]
  static WeightKernel gen_laplace(double b);  // requires b > 0

  std::string name() const;
};

/// Evaluates the kernel at xi >= 0:
///   gaussian:      exp(-xi / 2)
///   stable(b):     exp(-xi^(b/2))
///   gen_laplace(b): (1 + xi)^(-b)
double psi_eval(const WeightKernel& k, double xi);

}  // namespace ellgof
