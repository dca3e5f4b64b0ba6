#include "doctest.h"

#include <cmath>
#include <vector>

#include "sacovest/errors.hpp"
#include "sacovest/schedules.hpp"

using namespace sacovest;
using Bounds = std::vector<std::int64_t>;

TEST_CASE("step_at") {
  CHECK(step_at(StepSchedule(1.0, 0.75), 16) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(step_at(StepSchedule(3.7, 0.9), 1) == 3.7);
  CHECK(step_at(StepSchedule(0.5, 0.51), 1) == 0.5);
  CHECK_THROWS_AS(StepSchedule(1.0, 0.75).at(0), OutOfDomain);
}

TEST_CASE("step schedule validation") {
  CHECK_THROWS_AS(StepSchedule(0.0, 0.75), ValidationError);
  CHECK_THROWS_AS(StepSchedule(1.0, 0.5), ValidationError);
  CHECK_THROWS_AS(StepSchedule(1.0, 1.0), ValidationError);
}

TEST_CASE("step_at is strictly decreasing") {
  const StepSchedule s(0.5, 0.51);
  for (std::int64_t k = 1; k < 10000; ++k) CHECK(s.at(k + 1) < s.at(k));
}

TEST_CASE("boundaries_upto examples") {
  CHECK(boundaries_upto(BatchSchedule(1.0, 2.0), 10) == Bounds{1, 4, 9});
  CHECK(boundaries_upto(BatchSchedule(0.1, 2.0), 6) == Bounds{1, 2, 3, 4, 5, 6});
  CHECK(boundaries_upto(BatchSchedule(2.0, 3.0), 60) == Bounds{1, 16, 54});
  CHECK(boundaries_upto(BatchSchedule(1.0, 2.0), 1) == Bounds{1});
}

TEST_CASE("batch schedule validation") {
  CHECK_THROWS_AS(BatchSchedule(0.0, 2.0), ValidationError);
  CHECK_THROWS_AS(BatchSchedule(1.0, 1.0), ValidationError);
}

TEST_CASE("block_index examples") {
  const BatchSchedule s(1.0, 2.0);
  CHECK(block_index(s, 5) == BlockPosition{4, 2, false});
  CHECK(block_index(s, 1) == BlockPosition{1, 1, true});
  CHECK(block_index(s, 9) == BlockPosition{9, 1, true});
  CHECK(block_index(s, 8) == BlockPosition{4, 5, false});
}

TEST_CASE("with C = 1 floor(m^beta) is already strictly increasing") {
  for (double beta : {1.5, 2.0, 4.0, 8.0}) {
    const BatchSchedule s(1.0, beta);
    std::int64_t prev = 1;
    for (std::int64_t m = 1; m < 10000; ++m) {
      const auto raw = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(m + 1), beta)));
      if (raw > 9e18 || raw < 0) break;
      const std::int64_t next = s.next_boundary(m, prev);
      CHECK(next == raw);
      prev = next;
    }
  }
}

TEST_CASE("block bookkeeping invariants") {
  const BatchSchedule s(0.7, 2.5);
  const auto bounds = s.boundaries_upto(10000);
  for (std::size_t i = 1; i < bounds.size(); ++i) CHECK(bounds[i] > bounds[i - 1]);

  BlockCursor cursor(s);
  std::int64_t total_len = 0;
  std::int64_t triangular = 0;
  for (std::int64_t k = 1; k <= 10000; ++k) {
    const BlockPosition p = block_index(s, k);
    CHECK(p.length >= 1);
    CHECK(p.start <= k);
    CHECK(p.length == k - p.start + 1);
    CHECK(cursor.advance() == p);
    total_len += p.length;
  }
  // Sum of l_k equals the sum of 1 + 2 + ... + len over every (possibly partial) block.
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const std::int64_t end = i + 1 < bounds.size() ? bounds[i + 1] - 1 : 10000;
    const std::int64_t len = end - bounds[i] + 1;
    triangular += len * (len + 1) / 2;
  }
  CHECK(total_len == triangular);
}

TEST_CASE("copies share memoized boundaries safely") {
  BatchSchedule a(1.0, 2.0 / (1.0 - 0.51));
  const BatchSchedule b = a;
  CHECK(a.boundaries_upto(100000) == b.boundaries_upto(100000));
  CHECK(block_index(b, 100000).start == a.boundaries_upto(100000).back());
}

TEST_CASE("batch_exponent_admissible") {
  CHECK(batch_exponent_admissible(0.51, 2.0 / 0.49));
  CHECK_FALSE(batch_exponent_admissible(0.51, 1.5));
  CHECK_FALSE(batch_exponent_admissible(0.51, 1.0 / 0.49));
}
