#include "doctest.h"

#include <cmath>

#include "sacovest/errors.hpp"
#include "sacovest/inference.hpp"

using namespace sacovest;

namespace {

// Phi from the positive-term erf series erf(x) = 2/sqrt(pi) e^{-x^2} sum 2^n x^{2n+1} / (2n+1)!!.
double phi_series(double z) {
  const long double x = std::abs(static_cast<long double>(z)) / std::sqrt(2.0L);
  long double term = x, sum = x;
  for (int n = 1; n < 400; ++n) {
    term *= 2.0L * x * x / (2.0L * n + 1.0L);
    sum += term;
    if (term < sum * 1e-21L) break;
  }
  const long double erf = 2.0L / std::sqrt(3.14159265358979323846264338327950288L) * std::exp(-x * x) * sum;
  const long double half = 0.5L * erf;
  return static_cast<double>(z >= 0 ? 0.5L + half : 0.5L - half);
}

double quantile_bisection(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi_series(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Vector e(Eigen::Index d, Eigen::Index i) { return Vector::Unit(d, i); }

}  // namespace

TEST_CASE("series oracle sanity") {
  CHECK(phi_series(0.0) == 0.5);
  CHECK(phi_series(1.0) == doctest::Approx(0.841344746068543).epsilon(1e-14));
}

TEST_CASE("normal_quantile examples") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.975) == doctest::Approx(quantile_bisection(0.975)).epsilon(1e-12));
  CHECK(std::abs(normal_quantile(0.975) - 1.95996398) < 1e-8);
  CHECK(std::abs(normal_quantile(0.841344746) - 1.0) < 1e-8);
  CHECK_THROWS_AS(normal_quantile(0.0), OutOfDomain);
  CHECK_THROWS_AS(normal_quantile(1.0), OutOfDomain);
  CHECK_THROWS_AS(normal_quantile(std::nan("")), OutOfDomain);
}

TEST_CASE("normal_quantile inverts the series CDF on a grid") {
  double worst = 0.0;
  for (int i = -500; i <= 500; ++i) {
    const double z = i * 0.01;
    worst = std::max(worst, std::abs(normal_quantile(phi_series(z)) - z));
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("normal_quantile matches bisection to 1e-8") {
  for (double p : {1e-10, 1e-6, 0.001, 0.02, 0.024, 0.025, 0.1, 0.3, 0.7, 0.9, 0.976, 0.99, 0.999999}) {
    CHECK(std::abs(normal_quantile(p) - quantile_bisection(p)) <= 1e-8);
  }
}

TEST_CASE("confidence_interval examples") {
  const auto zero = confidence_interval(Vector::Ones(2), Matrix::Zero(2, 2), 10, e(2, 0), 0.95);
  CHECK(zero.lo == 1.0);
  CHECK(zero.hi == 1.0);

  const auto ci = confidence_interval(Vector::Zero(2), Matrix::Identity(2, 2), 100, e(2, 0), 0.95);
  CHECK(ci.lo == doctest::Approx(-0.19600).epsilon(1e-4));
  CHECK(ci.hi == doctest::Approx(0.19600).epsilon(1e-4));
  CHECK(ci.lo <= ci.hi);

  const Vector x = (Vector(2) << 0.3, -0.2).finished();
  const Matrix s = (Matrix(2, 2) << 2, 0.5, 0.5, 1).finished();
  const Vector v = (Vector(2) << 1, 2).finished();
  const auto a = confidence_interval(x, s, 50, v, 0.9);
  const auto b = confidence_interval(x, s, 50, Vector(3 * v), 0.9);
  CHECK(b.lo == doctest::Approx(3 * a.lo));
  CHECK(b.hi == doctest::Approx(3 * a.hi));
  const double truth = 0.1;
  CHECK(a.contains(truth) == b.contains(3 * truth));
}

TEST_CASE("confidence intervals nest by level") {
  const Vector x = (Vector(3) << 1, 2, 3).finished();
  const Matrix s = Matrix::Identity(3, 3) * 0.7;
  const Vector v = (Vector(3) << 1, -1, 0.5).finished();
  const auto wide = confidence_interval(x, s, 30, v, 0.99);
  const auto narrow = confidence_interval(x, s, 30, v, 0.90);
  CHECK(wide.lo <= narrow.lo);
  CHECK(wide.hi >= narrow.hi);
}

TEST_CASE("confidence_interval errors") {
  const Matrix neg = -Matrix::Identity(2, 2);
  CHECK_THROWS_AS(confidence_interval(Vector::Zero(2), neg, 10, e(2, 0), 0.95), DegenerateDirection);
  CHECK_NOTHROW(confidence_interval(Vector::Zero(2), Matrix(-1e-12 * Matrix::Identity(2, 2)), 10, e(2, 0), 0.95));
  CHECK_THROWS_AS(confidence_interval(Vector::Zero(2), Matrix::Identity(2, 2), 10, Vector::Zero(2), 0.95),
                  DegenerateDirection);
  CHECK_THROWS_AS(confidence_interval(Vector::Zero(2), Matrix::Identity(2, 2), 0, e(2, 0), 0.95), OutOfDomain);
  CHECK_THROWS_AS(confidence_interval(Vector::Zero(2), Matrix::Identity(2, 2), 10, e(2, 0), 1.0), OutOfDomain);
}

TEST_CASE("wald_test") {
  const Matrix s = Matrix::Identity(1, 1);
  const auto t0 = wald_test(Vector::Constant(1, 0.4), s, 100, e(1, 0), 0.4);
  CHECK(t0.statistic == 0.0);
  CHECK_FALSE(t0.reject_at(0.05));
  CHECK_FALSE(t0.reject_at(0.5));
  // sqrt(100) (x - 0) / 1 = 2.5 and 1.0
  CHECK(wald_test(Vector::Constant(1, 0.25), s, 100, e(1, 0), 0.0).reject_at(0.05));
  CHECK_FALSE(wald_test(Vector::Constant(1, 0.1), s, 100, e(1, 0), 0.0).reject_at(0.05));
  CHECK_THROWS_AS(wald_test(Vector::Zero(1), Matrix::Zero(1, 1), 10, e(1, 0), 0.0), DegenerateDirection);
}

TEST_CASE("rate_fit examples") {
  std::vector<std::pair<double, double>> exact;
  for (double n : {10.0, 100.0, 1000.0, 1e4}) exact.emplace_back(n, 1.0 / std::sqrt(n));
  const RateFit f = rate_fit(exact);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));

  const RateFit two = rate_fit({{10.0, 3.0}, {40.0, 1.5}});
  CHECK(two.slope == doctest::Approx(-0.5));
  CHECK(two.r_squared == doctest::Approx(1.0));

  CHECK_THROWS_AS(rate_fit({{10.0, 1.0}}), InsufficientPoints);
  CHECK_THROWS_AS(rate_fit({{10.0, 1.0}, {20.0, 0.0}}), NonPositiveValue);
  CHECK_THROWS_AS(rate_fit({{-1.0, 1.0}, {20.0, 1.0}}), NonPositiveValue);
}

TEST_CASE("rate_fit recovers a noisy slope and matches the normal equations") {
  RngStream rng(19, 0);
  std::vector<std::pair<double, double>> pts;
  Eigen::MatrixXd design(20, 2);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) {
    const double n = std::pow(2.0, 8 + 0.5 * i);
    const double err = 3.0 * std::pow(n, -0.125) * std::exp(0.02 * rng.normal());
    pts.emplace_back(n, err);
    design(i, 0) = 1.0;
    design(i, 1) = std::log(n);
    y(i) = std::log(err);
  }
  const RateFit f = rate_fit(pts);
  const Eigen::Vector2d beta = (design.transpose() * design).ldlt().solve(design.transpose() * y);
  CHECK(f.slope == doctest::Approx(beta(1)).epsilon(1e-10));
  CHECK(f.intercept == doctest::Approx(beta(0)).epsilon(1e-10));
  CHECK(std::abs(f.slope + 0.125) <= 0.05);
  CHECK(f.r_squared >= 0.0);
  CHECK(f.r_squared <= 1.0);
}

TEST_CASE("synthetic exact-normal coverage is nominal") {
  const Problem p = Problem::make_default(ProblemId::L1Quad);
  const Vector v = p.truth().tangent_basis.col(0);
  for (auto [reps, level] : {std::pair<std::int64_t, double>{2000, 0.95}, {5000, 0.95}, {5000, 0.8}}) {
    const double cov = synthetic_coverage(p.truth(), 1000, reps, v, level, 123);
    const double se = std::sqrt(level * (1 - level) / static_cast<double>(reps));
    CHECK(std::abs(cov - level) <= 3.0 * se);  // 2 se misses ~5% of seeds
  }
}

TEST_CASE("coverage_study argument checks") {
  const Problem p = Problem::make_default(ProblemId::L1Quad);
  RunConfig c;
  c.n = 100;
  c.step = StepSchedule(2.0, 0.51);
  const Vector v = p.truth().tangent_basis.col(0);
  CHECK_THROWS_AS(coverage_study(p, c, 0, v, 0.95), InvalidReps);
  CHECK_THROWS_AS(coverage_study(p, c, 5, v, 1.0), OutOfDomain);
  const CoverageResult r = coverage_study(p, c, 8, v, 0.95, 2);
  CHECK(r.rows.size() == 8);
  CHECK(r.coverage >= 0.0);
  CHECK(r.coverage <= 1.0);
  for (std::size_t i = 0; i < r.rows.size(); ++i) CHECK(r.rows[i].rep == static_cast<std::int64_t>(i));
}

TEST_CASE("monte_carlo_sigma on a smooth problem tracks the analytic covariance") {
  const Problem p = Problem::make_default(ProblemId::L1Quad);
  RunConfig c;
  c.n = 20000;
  c.step = StepSchedule(2.0, 0.51);
  const Matrix mc = monte_carlo_sigma(p, c, 300);
  const Vector v = p.truth().tangent_basis.col(0);
  const double truth = v.dot(p.truth().sigma_limit * v);
  CHECK(v.dot(mc * v) == doctest::Approx(truth).epsilon(0.25));
  CHECK_THROWS_AS(monte_carlo_sigma(p, c, 1), InvalidReps);
}
