#include "ellgof/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ellgof {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                      std::uint32_t& lo) {
  const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(prod >> 32);
  lo = static_cast<std::uint32_t>(prod);
}

inline void philox_round(std::uint32_t c[4], std::uint32_t k0,
                         std::uint32_t k1) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mul_hi_lo(kPhiloxM0, c[0], hi0, lo0);
  mul_hi_lo(kPhiloxM1, c[2], hi1, lo1);
  const std::uint32_t r0 = hi1 ^ c[1] ^ k0;
  const std::uint32_t r1 = lo1;
  const std::uint32_t r2 = hi0 ^ c[3] ^ k1;
  const std::uint32_t r3 = lo0;
  c[0] = r0;
  c[1] = r1;
  c[2] = r2;
  c[3] = r3;
}

inline void philox_4x32_10(const std::uint32_t counter[4],
                           const std::uint32_t key[2], std::uint32_t out[4]) {
  std::uint32_t c[4] = {counter[0], counter[1], counter[2], counter[3]};
  std::uint32_t k0 = key[0];
  std::uint32_t k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    philox_round(c, k0, k1);
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  out[0] = c[0];
  out[1] = c[1];
  out[2] = c[2];
  out[3] = c[3];
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream(std::uint64_t a, std::uint64_t b,
                            std::uint64_t c) {
  return mix64(mix64(mix64(a) ^ b) ^ c);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id) {}

void RngStream::refill() {
  const std::uint32_t counter[4] = {
      static_cast<std::uint32_t>(block_),
      static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(stream_id_),
      static_cast<std::uint32_t>(stream_id_ >> 32)};
  const std::uint32_t key[2] = {static_cast<std::uint32_t>(master_seed_),
                                static_cast<std::uint32_t>(master_seed_ >> 32)};
  std::uint32_t out[4];
  philox_4x32_10(counter, key, out);
  buf_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  buf_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  buf_pos_ = 0;
  ++block_;
}

std::uint64_t RngStream::next_u64() {
  if (buf_pos_ >= 2) refill();
  return buf_[buf_pos_++];
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_open01() {
  return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

double RngStream::next_normal() {
  if (have_spare_normal_) {
    have_spare_normal_ = false;
    return spare_normal_;
  }
  const double u1 = next_open01();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  have_spare_normal_ = true;
  return r * std::cos(theta);
}

double RngStream::next_exponential() { return -std::log(next_open01()); }

double RngStream::next_gamma(double shape) {
  if (!(shape > 0.0)) {
    throw std::domain_error("gamma shape must be positive");
  }
  if (shape < 1.0) {
    const double u = next_open01();
    return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = next_open01();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RngStream::next_chi_squared(double nu) {
  if (!(nu > 0.0)) {
    throw std::domain_error("chi-squared degrees of freedom must be positive");
  }
  return 2.0 * next_gamma(0.5 * nu);
}

double RngStream::next_positive_stable(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw std::domain_error("positive-stable index must lie in (0, 1]");
  }
  if (alpha == 1.0) return 1.0;
  const double u = std::numbers::pi * next_open01();
  const double w = next_exponential();
  const double s =
      std::sin(alpha * u) / std::pow(std::sin(u), 1.0 / alpha) *
      std::pow(std::sin((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha);
  return s;
}

}  // namespace ellgof
