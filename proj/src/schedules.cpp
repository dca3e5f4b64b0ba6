#include "sacovest/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sacovest/errors.hpp"

namespace sacovest {

StepSchedule::StepSchedule(double eta, double alpha) : eta_(eta), alpha_(alpha) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be positive");
  if (!(alpha > 0.5 && alpha < 1.0)) throw ValidationError("alpha must lie in (1/2, 1)");
}

double StepSchedule::at(std::int64_t k) const {
  if (k < 1) throw OutOfDomain("step index must be >= 1");
  return eta_ * std::pow(static_cast<double>(k), -alpha_);
}

BatchSchedule::BatchSchedule(double c, double beta)
    : c_(c), beta_(beta), cache_(std::make_shared<Cache>()) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("batch constant C must be positive");
  if (!(beta > 1.0) || !std::isfinite(beta)) throw ValidationError("batch exponent beta must exceed 1");
}

std::int64_t BatchSchedule::next_boundary(std::int64_t m, std::int64_t a_m) const {
  const double raw = c_ * std::pow(static_cast<double>(m + 1), beta_);
  // Exact integers such as 3^2 may come back from pow a few ulps low; snap those.
  const double nearest = std::round(raw);
  const double floored =
      std::abs(raw - nearest) <= 4.0 * std::numeric_limits<double>::epsilon() * raw ? nearest : std::floor(raw);
  const double capped = std::min(floored, 9.0e18);
  return std::max(static_cast<std::int64_t>(capped), a_m + 1);
}

void BatchSchedule::extend_to(std::int64_t n) const {
  auto& b = cache_->bounds;
  while (b.back() <= n) {
    const auto m = static_cast<std::int64_t>(b.size());
    b.push_back(next_boundary(m, b.back()));
  }
}

std::vector<std::int64_t> BatchSchedule::boundaries_upto(std::int64_t n) const {
  if (n < 1) throw OutOfDomain("boundaries_upto requires n >= 1");
  std::lock_guard lock(cache_->mu);
  extend_to(n);
  const auto& b = cache_->bounds;
  return {b.begin(), std::upper_bound(b.begin(), b.end(), n)};
}

BlockPosition BatchSchedule::block_index(std::int64_t k) const {
  if (k < 1) throw OutOfDomain("block_index requires k >= 1");
  std::lock_guard lock(cache_->mu);
  extend_to(k);
  const auto& b = cache_->bounds;
  const auto it = std::prev(std::upper_bound(b.begin(), b.end(), k));
  return {*it, k - *it + 1, *it == k};
}

BlockCursor::BlockCursor(const BatchSchedule& schedule)
    : schedule_(schedule), next_(schedule.next_boundary(1, 1)) {}

BlockPosition BlockCursor::advance() {
  ++k_;
  bool is_new = (k_ == 1);
  if (k_ == next_) {
    ++m_;
    current_ = next_;
    next_ = schedule_.next_boundary(m_, current_);
    is_new = true;
  }
  return {current_, k_ - current_ + 1, is_new};
}

bool batch_exponent_admissible(double alpha, double beta) {
  return alpha < 1.0 && beta > 1.0 / (1.0 - alpha);
}

}  // namespace sacovest
