#include "doctest.h"

#include <stdexcept>

#include "sacovest/covest.hpp"
#include "sacovest/engine.hpp"
#include "sacovest/errors.hpp"
#include "sacovest/prox.hpp"

using namespace sacovest;

namespace {

RunConfig config(std::int64_t n, double eta, std::uint64_t seed = 1) {
  RunConfig c;
  c.n = n;
  c.seed = seed;
  c.step = StepSchedule(eta, 0.51);
  c.batch = BatchSchedule(1.0, 2.0 / 0.49);
  return c;
}

}  // namespace

TEST_CASE("stopping_time examples") {
  CHECK(stopping_time({0.1, 0.1, 0.1}, 0, 0.5, 2) == 3);
  CHECK(stopping_time({0.1, 0.3}, 0, 0.2, 1) == 1);
  CHECK(stopping_time({0.3, 0.3, 0.1}, 2, 0.2, 2) == 3);
  CHECK(stopping_time({0.3, 0.1, 0.3}, 1, 0.2, 2) == 2);
}

TEST_CASE("empty run") {
  const Problem p = Problem::make_default(ProblemId::L1Quad);
  const RunResult r = run(p, config(0, 2.0));
  CHECK(r.x_final == p.default_x0());
  CHECK(r.sigma_hat == Matrix::Zero(5, 5));
  CHECK(r.tau_infinite());
  CHECK(r.containment);
}

TEST_CASE("config validation") {
  const Problem p = Problem::make_default(ProblemId::L1Quad);
  RunConfig c = config(10, 1.0);
  c.k_s = 11;
  CHECK_THROWS_AS(run(p, c), ValidationError);
  c = config(10, 1.0);
  c.delta = 0.0;
  CHECK_THROWS_AS(run(p, c), ValidationError);
  c = config(10, 1.0);
  c.diagnostics_stride = 0;
  CHECK_THROWS_AS(run(p, c), ValidationError);
  c = config(10, 1.0);
  c.x0 = Vector::Constant(4, 2.0);
  CHECK_THROWS_AS(run(Problem::make_default(ProblemId::BoxQP), c), InfeasibleInput);
}

TEST_CASE("run is deterministic") {
  const Problem p = Problem::make_default(ProblemId::EntropyGame);
  const RunResult a = run(p, config(3000, 0.5, 77));
  const RunResult b = run(p, config(3000, 0.5, 77));
  CHECK(a.x_bar == b.x_bar);
  CHECK(a.sigma_hat == b.sigma_hat);
  CHECK(a.tau == b.tau);
  REQUIRE(a.dist_to_star.size() == b.dist_to_star.size());
  for (std::size_t i = 0; i < a.dist_to_star.size(); ++i) CHECK(a.dist_to_star[i].value == b.dist_to_star[i].value);
  const RunResult c = run(p, config(3000, 0.5, 78));
  CHECK(c.x_bar != a.x_bar);
}

TEST_CASE("x_bar and sigma_hat agree with a hand-rolled loop") {
  const Problem p = Problem::make_default(ProblemId::L1Quad);
  const RunConfig c = config(4000, 2.0, 5);
  const RunResult r = run(p, c);

  RngStream rng(c.seed, c.stream);
  Vector x = p.default_x0(), nu, next;
  std::vector<Vector> xs;
  for (std::int64_t k = 1; k <= c.n; ++k) {
    p.sample_noise_into(p.noise(), rng, x, nu);
    p.next_iterate(c.step.at(k), x, nu, next);
    x = next;
    xs.push_back(x);
  }
  Vector sum = Vector::Zero(5);
  for (const auto& v : xs) sum += v;
  const Vector mean = sum / static_cast<double>(c.n);
  CHECK((r.x_final - x).norm() == 0.0);
  CHECK((r.x_bar - mean).norm() <= 1e-10 * mean.norm());
  const Matrix direct = bm_direct(xs, c.batch);
  CHECK(operator_norm(Matrix(r.sigma_hat - direct)) <= 1e-10 * (1.0 + operator_norm(direct)));
}

TEST_CASE("deterministic box run converges") {
  const Problem p = Problem::make_default(ProblemId::BoxQP);
  RunConfig c = config(10000, 0.5);
  c.noise = NoiseModel{Matrix::Zero(4, 4), 0.0};
  const RunResult r = run(p, c);
  CHECK((r.x_final - p.truth().x_star).norm() < 1e-3);
}

TEST_CASE("projected iterates stay feasible") {
  for (auto id : {ProblemId::BoxQP, ProblemId::EntropyGame}) {
    const Problem p = Problem::make_default(id);
    RngStream rng(3, 0);
    Vector x = p.default_x0(), nu, next;
    for (std::int64_t k = 1; k <= 5000; ++k) {
      p.sample_noise_into(p.noise(), rng, x, nu);
      p.next_iterate(0.5 * std::pow(static_cast<double>(k), -0.51), x, nu, next);
      x = next;
      CHECK_NOTHROW(p.check_domain(x));
    }
  }
}

TEST_CASE("divergence is reported") {
  const Problem p = Problem::make_default(ProblemId::L1Quad);
  CHECK_THROWS_AS(run(p, config(1000, 50.0)), NumericalDivergence);
}

TEST_CASE("diagnostics respect the stride") {
  const Problem p = Problem::make_default(ProblemId::L1Quad);
  RunConfig c = config(1000, 2.0);
  c.diagnostics_stride = 10;
  const RunResult r = run(p, c);
  CHECK(r.dist_to_star.size() == 100);
  CHECK(r.shadow_sq_dist.front().k == 10);
  CHECK(r.shadow_sq_dist.back().k == 1000);
}

TEST_CASE("tau is computed from the full path") {
  const Problem p = Problem::make_default(ProblemId::L1Quad);
  RunConfig c = config(200, 2.0);
  c.delta = 1e-6;  // x0 = 0 is far from x*, so tau = k_s
  c.k_s = 17;
  CHECK(run(p, c).tau == 17);
}

TEST_CASE("run_replications keeps rep order and is thread-count independent") {
  const Problem p = Problem::make_default(ProblemId::BoxQP);
  auto fn = [&](std::int64_t rep) {
    RunConfig c = config(500, 0.5, 9);
    c.stream = static_cast<std::uint64_t>(rep);
    return run(p, c).x_bar;
  };
  const auto one = run_replications(13, 1, fn);
  const auto four = run_replications(13, 4, fn);
  REQUIRE(one.size() == 13);
  for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i] == four[i]);

  auto boom = [](std::int64_t rep) -> int {
    if (rep == 3 || rep == 7) throw std::runtime_error("rep " + std::to_string(rep));
    return static_cast<int>(rep);
  };
  try {
    run_replications(10, 3, boom);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "rep 3");
  }
}
