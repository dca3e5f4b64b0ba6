#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sacovest/engine.hpp"
#include "sacovest/limiting_sigma.hpp"
#include "sacovest/numerics.hpp"
#include "sacovest/problems.hpp"

namespace sacovest {

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  Vector direction;

  bool contains(double value) const { return lo <= value && value <= hi; }
  double half_width() const { return 0.5 * (hi - lo); }
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

struct WaldTest {
  double statistic = 0.0;
  /// True when |T| exceeds the two-sided normal critical value at level q.
  bool reject_at(double q) const;
};

/// Standard normal CDF.
double normal_cdf(double z);

/// z with Phi(z) = p. Rational approximation plus one Newton step.
double normal_quantile(double p);

ConfidenceInterval confidence_interval(const Vector& x_bar, const Matrix& sigma_hat, std::int64_t n,
                                       const Vector& v, double level);

WaldTest wald_test(const Vector& x_bar, const Matrix& sigma_hat, std::int64_t n, const Vector& v,
                   double null_value);

/// Ordinary least squares of log(error) on log(n).
RateFit rate_fit(const std::vector<std::pair<double, double>>& points);

struct CoverageRow {
  std::int64_t rep = 0;
  double error = 0.0;  // ||sigma_hat - Sigma||_2, NaN when no analytic truth exists
  ConfidenceInterval ci;
  bool covered = false;
};

struct CoverageResult {
  double coverage = 0.0;
  std::vector<CoverageRow> rows;
};

/// Runs `reps` independent replications (stream = rep index) and reports the
/// fraction of per-rep intervals that contain v^T x*.
CoverageResult coverage_study(const Problem& problem, const RunConfig& config, std::int64_t reps,
                              const Vector& v, double level, int threads = 1);

/// Coverage when xbar is drawn exactly from N(x*, Sigma / n) and sigma_hat := Sigma.
/// Sigma is sampled through the factor U H^{-1} chol(S) of the ground truth.
double synthetic_coverage(const GroundTruth& truth, std::int64_t n, std::int64_t reps, const Vector& v,
                          double level, std::uint64_t seed);

/// Sample covariance of sqrt(n) (xbar_n - x*) across `reps` replications.
Matrix monte_carlo_sigma(const Problem& problem, const RunConfig& config, std::int64_t reps, int threads = 1);

}  // namespace sacovest
