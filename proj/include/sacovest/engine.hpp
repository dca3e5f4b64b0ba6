#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <utility>
#include <vector>

#include "sacovest/covest.hpp"
#include "sacovest/mean.hpp"
#include "sacovest/problems.hpp"
#include "sacovest/schedules.hpp"

namespace sacovest {

struct RunConfig {
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  /// Replication index; selects the RngStream of this run.
  std::uint64_t stream = 0;
  StepSchedule step{0.5, 0.51};
  BatchSchedule batch{1.0, 2.0 / (1.0 - 0.51)};
  std::int64_t k_s = 0;
  double delta = 0.5;
  /// Initial point; the problem's default when empty.
  std::optional<Vector> x0;
  /// Noise model; the problem's own when empty.
  std::optional<NoiseModel> noise;
  std::int64_t diagnostics_stride = 1;
  /// Iterates k <= burn_in are not fed to the mean or the estimator.
  std::int64_t burn_in = 0;

  void validate() const;
};

struct TracePoint {
  std::int64_t k = 0;
  double value = 0.0;
};

struct RunResult {
  std::int64_t n = 0;
  Vector x_final;
  Vector x_bar;
  Matrix sigma_hat;
  /// First l >= k_s with ||x_l - x*|| > delta; n + 1 encodes "never".
  std::int64_t tau = 0;
  bool containment = true;
  std::vector<TracePoint> shadow_sq_dist;  // (k, dist(x_k, M)^2)
  std::vector<TracePoint> dist_to_star;    // (k, ||x_k - x*||^2)
  /// Fraction of k in [n/2, n] whose iterate lies exactly on the active manifold.
  double identified_fraction = 0.0;

  bool tau_infinite() const { return tau > n; }
};

/// Runs n steps of x_{k+1} = x_k - eta_{k+1} G(x_k, nu_{k+1}).
RunResult run(const Problem& problem, const RunConfig& config);

/// Smallest l >= k_s with dists[l] > delta, or n + 1 when the path never leaves.
/// dists is indexed 0..n.
std::int64_t stopping_time(const std::vector<double>& dists, std::int64_t k_s, double delta, std::int64_t n);

/// Runs fn(rep) for rep in [0, reps) on `threads` workers and returns the
/// results in rep order. The first exception (by rep index) is rethrown.
template <typename Fn>
auto run_replications(std::int64_t reps, int threads, Fn&& fn) -> std::vector<decltype(fn(std::int64_t{}))>;

}  // namespace sacovest

#include "sacovest/detail/replications.hpp"
