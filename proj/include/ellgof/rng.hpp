#pragma once

#include <cstdint>

namespace ellgof {

/// Mixes a 64-bit value through the splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Builds a stream id from up to three tags (phase, task, replicate).
/// Distinct tag tuples map to distinct ids with overwhelming probability,
/// so changing one loop bound never perturbs the streams of another.
std::uint64_t derive_stream(std::uint64_t a, std::uint64_t b = 0,
                            std::uint64_t c = 0);

/// Counter-based random stream (Philox 4x32-10).
///
/// The generator is a pure function of (master_seed, stream_id, draw index):
/// identical keys replay identical sequences, distinct stream ids give
/// statistically independent streams regardless of thread scheduling.
/// All derived variates (normal, gamma, ...) use fixed algorithms so that
/// sequences are bit-reproducible across runs.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double next_double();

  /// Uniform on the open interval (0, 1); safe as a log/division argument.
  double next_open01();

  /// Standard normal via Box-Muller (pairs are cached).
  double next_normal();

  /// Exponential with unit rate.
  double next_exponential();

  /// Gamma with the given shape and unit rate (Marsaglia-Tsang squeeze,
  /// with the shape-boost transform for shape < 1).
  double next_gamma(double shape);

  /// Chi-squared with nu degrees of freedom.
  double next_chi_squared(double nu);

  /// Positive (one-sided) stable variate S with E[exp(-s*S)] = exp(-s^alpha),
  /// alpha in (0, 1]; alpha = 1 degenerates to the constant 1.
  /// Chambers-Mallows-Stuck construction.
  double next_positive_stable(double alpha);

 private:
  void refill();

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::uint64_t buf_[2] = {0, 0};
  int buf_pos_ = 2;
  double spare_normal_ = 0.0;
  bool have_spare_normal_ = false;
};

}  // namespace ellgof
