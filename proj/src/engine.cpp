#include "sacovest/engine.hpp"

#include <cmath>
#include <string>

#include "sacovest/errors.hpp"
#include "sacovest/rng.hpp"

namespace sacovest {

namespace {
constexpr double kDivergenceNorm = 1e12;
}

void RunConfig::validate() const {
  if (n < 0) throw ValidationError("n must be nonnegative");
  if (k_s < 0) throw ValidationError("k_s must be nonnegative");
  if (k_s > n) throw ValidationError("k_s must not exceed n");
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  if (diagnostics_stride < 1) throw ValidationError("diagnostics_stride must be at least 1");
  if (burn_in < 0) throw ValidationError("burn_in must be nonnegative");
}

RunResult run(const Problem& problem, const RunConfig& config) {
  config.validate();
  const Eigen::Index d = problem.dim();
  const GroundTruth& truth = problem.truth();
  const NoiseModel& noise = config.noise ? *config.noise : problem.noise();

  RunResult result;
  result.n = config.n;
  Vector x = config.x0 ? *config.x0 : problem.default_x0();
  problem.check_domain(x);

  RngStream rng(config.seed, config.stream);
  MeanState<double> mean(d);
  BatchMeans<double> bm(d, config.batch);
  Vector nu(d);
  Vector next(d);

  const std::int64_t n = config.n;
  std::int64_t tau = n + 1;
  auto track_exit = [&](std::int64_t k, double dist_sq) {
    if (tau > n && k >= config.k_s && dist_sq > config.delta * config.delta) tau = k;
  };
  if (n > 0) track_exit(0, (x - truth.x_star).squaredNorm());

  const std::int64_t ident_from = n / 2;
  std::int64_t ident_hits = 0;

  for (std::int64_t k = 1; k <= n; ++k) {
    const double eta = config.step.at(k);
    problem.sample_noise_into(noise, rng, x, nu);
    problem.next_iterate(eta, x, nu, next);
    x.swap(next);
    if (!x.allFinite() || x.norm() > kDivergenceNorm) {
      throw NumericalDivergence("iterate norm exceeded 1e12 at k = " + std::to_string(k) +
                                "; the stepsize is likely too large");
    }
    if (k > config.burn_in) {
      mean.update(x);
      bm.update(x);
    }
    const double dist_sq = (x - truth.x_star).squaredNorm();
    track_exit(k, dist_sq);
    if (k >= ident_from && problem.on_manifold_exact(x)) ++ident_hits;
    if (k % config.diagnostics_stride == 0) {
      result.dist_to_star.push_back({k, dist_sq});
      result.shadow_sq_dist.push_back({k, (x - problem.project_manifold(x)).squaredNorm()});
    }
  }

  result.x_final = x;
  result.x_bar = mean.count > 0 ? mean.mean : x;
  result.sigma_hat = mean.count > 0 ? bm.finalize(mean) : Matrix::Zero(d, d);
  result.tau = tau;
  result.containment = tau > n;
  result.identified_fraction =
      n > 0 ? static_cast<double>(ident_hits) / static_cast<double>(n - ident_from + 1) : 0.0;
  return result;
}

std::int64_t stopping_time(const std::vector<double>& dists, std::int64_t k_s, double delta, std::int64_t n) {
  if (static_cast<std::int64_t>(dists.size()) < n + 1) {
    throw DimensionMismatch("stopping_time: dists must be indexed 0..n");
  }
  for (std::int64_t l = std::max<std::int64_t>(k_s, 0); l <= n; ++l) {
    if (dists[static_cast<std::size_t>(l)] > delta) return l;
  }
  return n + 1;
}

}  // namespace sacovest
