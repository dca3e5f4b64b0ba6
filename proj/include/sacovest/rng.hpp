#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>

#include "sacovest/numerics.hpp"

namespace sacovest {

/// Counter-based 64-bit random stream.
///
/// Draw i of stream (seed, stream_id) is a keyed bijective mix of i, so
/// replications can be generated in any order and adding streams never
/// perturbs existing ones. Normals come from Box-Muller on the stream's
/// own uniforms, which keeps draws bit-identical across standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id), key0_(mix64(seed)),
        key1_(mix64(stream_id ^ mix64(seed + kGolden))) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64() {
    const std::uint64_t x = counter_++;
    return mix64(mix64(x * kGolden + key0_) ^ key1_);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // (0, 1] keeps the logarithm finite.
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  template <typename Derived>
  void fill_normal(Eigen::MatrixBase<Derived>& out) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = normal();
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key0_;
  std::uint64_t key1_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Returns factor * z with z standard normal, so the draw has covariance
/// factor * factor^T.
template <typename Derived>
Vec<typename Derived::Scalar> gaussian_vector(RngStream& rng, const Eigen::MatrixBase<Derived>& factor) {
  using Scalar = typename Derived::Scalar;
  Vec<Scalar> z(factor.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = static_cast<Scalar>(rng.normal());
  return factor * z;
}

}  // namespace sacovest
