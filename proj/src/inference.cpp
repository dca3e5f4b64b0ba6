#include "sacovest/inference.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "sacovest/errors.hpp"
#include "sacovest/rng.hpp"

namespace sacovest {

namespace {

constexpr double kVarianceFloor = -1e-10;

double quadratic_form(const Matrix& sigma, const Vector& v) {
  if (sigma.rows() != v.size() || sigma.cols() != v.size()) {
    throw DimensionMismatch("direction dimension differs from covariance dimension");
  }
  return v.dot(sigma * v);
}

// Acklam's rational approximation of the normal quantile.
double quantile_initial(double p) {
  static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                           1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                           6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                           -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                           3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw OutOfDomain("normal_quantile: p must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  const double z = quantile_initial(p);
  const double density = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  return z - (normal_cdf(z) - p) / density;
}

bool WaldTest::reject_at(double q) const { return std::abs(statistic) > normal_quantile(1.0 - q / 2.0); }

ConfidenceInterval confidence_interval(const Vector& x_bar, const Matrix& sigma_hat, std::int64_t n,
                                       const Vector& v, double level) {
  if (n < 1) throw OutOfDomain("confidence_interval: n must be positive");
  if (!(level > 0.0 && level < 1.0)) throw OutOfDomain("confidence_interval: level must lie in (0, 1)");
  if (v.size() != x_bar.size()) throw DimensionMismatch("confidence_interval: direction dimension mismatch");
  if (v.squaredNorm() == 0.0) throw DegenerateDirection("confidence_interval: direction must be nonzero");
  const double var = quadratic_form(sigma_hat, v);
  if (var < kVarianceFloor) throw DegenerateDirection("confidence_interval: negative variance along direction");
  const double z = normal_quantile(1.0 - (1.0 - level) / 2.0);
  const double center = v.dot(x_bar);
  const double half = z * std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  return {center - half, center + half, level, v};
}

WaldTest wald_test(const Vector& x_bar, const Matrix& sigma_hat, std::int64_t n, const Vector& v,
                   double null_value) {
  if (n < 1) throw OutOfDomain("wald_test: n must be positive");
  if (v.size() != x_bar.size()) throw DimensionMismatch("wald_test: direction dimension mismatch");
  const double var = quadratic_form(sigma_hat, v);
  if (!(var > 0.0)) throw DegenerateDirection("wald_test: variance along direction must be positive");
  return {std::sqrt(static_cast<double>(n)) * (v.dot(x_bar) - null_value) / std::sqrt(var)};
}

RateFit rate_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw InsufficientPoints("rate_fit: need at least two points");
  const auto m = static_cast<Eigen::Index>(points.size());
  Eigen::VectorXd lx(m), ly(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto [n, err] = points[static_cast<std::size_t>(i)];
    if (!(n > 0.0) || !(err > 0.0)) throw NonPositiveValue("rate_fit: n and error must be positive");
    lx(i) = std::log(n);
    ly(i) = std::log(err);
  }
  const double mx = lx.mean();
  const double my = ly.mean();
  const double sxx = (lx.array() - mx).square().sum();
  const double sxy = ((lx.array() - mx) * (ly.array() - my)).sum();
  const double syy = (ly.array() - my).square().sum();
  if (sxx == 0.0) throw InsufficientPoints("rate_fit: all n coincide");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double sse = (ly.array() - (fit.intercept + fit.slope * lx.array())).square().sum();
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  return fit;
}

CoverageResult coverage_study(const Problem& problem, const RunConfig& config, std::int64_t reps,
                              const Vector& v, double level, int threads) {
  if (reps < 1) throw InvalidReps("coverage_study: reps must be at least 1");
  // Rejects level = 1.0 and friends before any run.
  normal_quantile(1.0 - (1.0 - level) / 2.0);
  const GroundTruth& truth = problem.truth();
  const double target = v.dot(truth.x_star);
  const bool analytic = truth.sigma_mode == SigmaTruthMode::Analytic;

  auto rows = run_replications(reps, threads, [&](std::int64_t rep) {
    RunConfig cfg = config;
    cfg.stream = static_cast<std::uint64_t>(rep);
    cfg.diagnostics_stride = std::max<std::int64_t>(cfg.n, 1);
    const RunResult r = run(problem, cfg);
    CoverageRow row;
    row.rep = rep;
    row.error = analytic ? operator_norm(r.sigma_hat - truth.sigma_limit) : std::numeric_limits<double>::quiet_NaN();
    row.ci = confidence_interval(r.x_bar, r.sigma_hat, std::max<std::int64_t>(config.n - config.burn_in, 1), v, level);
    row.covered = row.ci.contains(target);
    return row;
  });

  CoverageResult out;
  std::int64_t hits = 0;
  for (const auto& row : rows) hits += row.covered ? 1 : 0;
  out.coverage = static_cast<double>(hits) / static_cast<double>(reps);
  out.rows = std::move(rows);
  return out;
}

double synthetic_coverage(const GroundTruth& truth, std::int64_t n, std::int64_t reps, const Vector& v,
                          double level, std::uint64_t seed) {
  if (reps < 1) throw InvalidReps("synthetic_coverage: reps must be at least 1");
  const Eigen::Index r = truth.rank();
  Matrix factor = Matrix::Zero(truth.dim(), std::max<Eigen::Index>(r, 1));
  if (r > 0) factor = truth.tangent_basis * solve_linear(truth.jacobian_h, spd_factor(truth.noise_cov_s));
  const double target = v.dot(truth.x_star);
  std::int64_t hits = 0;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::int64_t rep = 0; rep < reps; ++rep) {
    RngStream rng(seed, static_cast<std::uint64_t>(rep));
    const Vector x_bar = truth.x_star + scale * gaussian_vector(rng, factor);
    hits += confidence_interval(x_bar, truth.sigma_limit, n, v, level).contains(target) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(reps);
}

Matrix monte_carlo_sigma(const Problem& problem, const RunConfig& config, std::int64_t reps, int threads) {
  if (reps < 2) throw InvalidReps("monte_carlo_sigma: need at least two replications");
  const double root_n = std::sqrt(static_cast<double>(config.n - config.burn_in));
  const Vector& x_star = problem.truth().x_star;
  auto scaled = run_replications(reps, threads, [&](std::int64_t rep) {
    RunConfig cfg = config;
    cfg.stream = static_cast<std::uint64_t>(rep);
    cfg.diagnostics_stride = std::max<std::int64_t>(cfg.n, 1);
    return Vector(root_n * (run(problem, cfg).x_bar - x_star));
  });
  Vector center = Vector::Zero(problem.dim());
  for (const auto& s : scaled) center += s;
  center /= static_cast<double>(reps);
  Matrix cov = Matrix::Zero(problem.dim(), problem.dim());
  for (const auto& s : scaled) cov.noalias() += (s - center) * (s - center).transpose();
  return cov / static_cast<double>(reps - 1);
}

}  // namespace sacovest
