#include "doctest.h"

#include <vector>

#include "sacovest/covest.hpp"
#include "sacovest/errors.hpp"
#include "sacovest/mean.hpp"
#include "sacovest/rng.hpp"

using namespace sacovest;

namespace {

Vector scalar(double x) { return Vector::Constant(1, x); }

Matrix streaming(const std::vector<Vector>& xs, const BatchSchedule& s) {
  BatchMeans<double> bm(xs.front().size(), s);
  MeanState<double> mean(xs.front().size());
  for (const auto& x : xs) {
    bm.update(x);
    mean.update(x);
  }
  return bm.finalize(mean);
}

std::vector<Vector> random_sequence(RngStream& rng, std::int64_t n, Eigen::Index d) {
  std::vector<Vector> xs;
  xs.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    Vector x(d);
    rng.fill_normal(x);
    xs.push_back(x);
  }
  return xs;
}

}  // namespace

TEST_CASE("mean updates") {
  MeanState<double> m(1);
  m.update(scalar(1));
  m.update(scalar(3));
  CHECK(m.mean(0) == 2.0);
  const auto single = update_mean(MeanState<double>(2), Vector::Constant(2, 1.5));
  CHECK(single.mean == Vector::Constant(2, 1.5));
  CHECK(single.count == 1);

  RngStream rng(2, 0);
  MeanState<double> big(3);
  Vector sum = Vector::Zero(3);
  for (int i = 0; i < 10000; ++i) {
    Vector x(3);
    rng.fill_normal(x);
    x.array() += 5.0;
    big.update(x);
    sum += x;
  }
  CHECK((big.mean - sum / 10000.0).norm() <= 1e-10 * (sum / 10000.0).norm());
}

TEST_CASE("bm_update bookkeeping") {
  const BatchSchedule s(1.0, 2.0);
  BatchMeans<double> bm(2, s);
  const Vector x1 = (Vector(2) << 1, 2).finished();
  bm = bm_update(bm, x1);
  CHECK(bm.block_sum() == x1);
  CHECK(bm.block_length() == 1);
  CHECK(bm.a_mat() == x1 * x1.transpose());
  CHECK(bm.l_total() == 1.0);

  for (int i = 0; i < 4; ++i) bm.update(Vector::Zero(2));
  // boundaries [1, 4, 9]: l = (1, 2, 3, 1, 2)
  CHECK(bm.l_total() == 9.0);
  CHECK(bm.c_scalar() == 1.0 + 4 + 9 + 1 + 4);
  CHECK(bm.c_scalar() >= bm.l_total());

  BatchMeans<double> zeros(3, s);
  for (int i = 0; i < 7; ++i) zeros.update(Vector::Zero(3));
  CHECK(zeros.a_mat().norm() == 0.0);
  CHECK(zeros.b_vec().norm() == 0.0);
}

TEST_CASE("bm_finalize examples") {
  const BatchSchedule each_own(0.1, 2.0);  // boundaries 1, 2, 3, ...
  const BatchSchedule squares(1.0, 2.0);   // boundaries 1, 4, 9, ...

  CHECK(streaming({scalar(4.2)}, squares).norm() == 0.0);
  CHECK(streaming({scalar(1), scalar(3)}, each_own)(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(streaming({scalar(1), scalar(3)}, squares)(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  CHECK(bm_direct(std::vector<Vector>{scalar(4.2)}, squares).norm() == 0.0);
  CHECK(bm_direct(std::vector<Vector>{scalar(1), scalar(3)}, each_own)(0, 0) == doctest::Approx(1.0));
  CHECK(bm_direct(std::vector<Vector>{scalar(1), scalar(3)}, squares)(0, 0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("errors on empty input") {
  const BatchSchedule s(1.0, 2.0);
  BatchMeans<double> bm(2, s);
  CHECK_THROWS_AS(bm.finalize(MeanState<double>(2)), EmptyState);
  CHECK_THROWS_AS(bm_direct(std::vector<Vector>{}, s), EmptySequence);
  bm.update(Vector::Zero(2));
  CHECK_THROWS_AS(bm.update(Vector::Zero(3)), DimensionMismatch);
}

TEST_CASE("constant sequence gives zero") {
  const std::vector<Vector> xs(500, Vector::Constant(3, 2.5));
  CHECK(operator_norm(bm_direct(xs, BatchSchedule(1.0, 2.0))) < 1e-12);
  CHECK(operator_norm(streaming(xs, BatchSchedule(1.0, 2.0))) < 1e-9);
}

TEST_CASE("streaming equals direct on a random sequence") {
  RngStream rng(31, 0);
  const auto xs = random_sequence(rng, 2000, 3);
  const BatchSchedule s(1.0, 2.0 / 0.49);
  const Matrix direct = bm_direct(xs, s);
  CHECK(operator_norm(Matrix(streaming(xs, s) - direct)) <= 1e-10 * operator_norm(direct));
}

TEST_CASE("translation invariance and PSD") {
  RngStream rng(8, 0);
  auto xs = random_sequence(rng, 3000, 4);
  const BatchSchedule s(0.5, 3.0);
  const Matrix base = streaming(xs, s);
  const Vector shift = (Vector(4) << 3, -1, 0.5, 2).finished();
  for (auto& x : xs) x += shift;
  const Matrix shifted = streaming(xs, s);
  CHECK(operator_norm(Matrix(shifted - base)) <= 1e-10 * (1.0 + operator_norm(base)));
  CHECK_NOTHROW(spd_factor(Matrix(base + 1e-12 * Matrix::Identity(4, 4))));
  CHECK((base - base.transpose()).norm() == 0.0);
}
