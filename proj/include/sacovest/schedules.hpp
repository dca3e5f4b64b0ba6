#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

namespace sacovest {

/// eta_k = eta * k^(-alpha), with 1/2 < alpha < 1.
class StepSchedule {
 public:
  StepSchedule(double eta, double alpha);

  double eta() const { return eta_; }
  double alpha() const { return alpha_; }
  double at(std::int64_t k) const;

 private:
  double eta_;
  double alpha_;
};

inline double step_at(const StepSchedule& s, std::int64_t k) { return s.at(k); }

struct BlockPosition {
  std::int64_t start = 1;   // t_k
  std::int64_t length = 1;  // l_k
  bool is_new_block = true;

  friend bool operator==(const BlockPosition&, const BlockPosition&) = default;
};

/// Strictly increasing batch boundaries a_1 = 1, a_m = max(floor(C m^beta), a_{m-1} + 1).
///
/// Boundaries are memoized behind a mutex, so a single schedule can be read
/// from any number of threads.
class BatchSchedule {
 public:
  BatchSchedule(double c, double beta);

  double c() const { return c_; }
  double beta() const { return beta_; }

  /// All boundaries <= n.
  std::vector<std::int64_t> boundaries_upto(std::int64_t n) const;
  BlockPosition block_index(std::int64_t k) const;

  /// a_{m+1} given m and a_m.
  std::int64_t next_boundary(std::int64_t m, std::int64_t a_m) const;

 private:
  struct Cache {
    std::mutex mu;
    std::vector<std::int64_t> bounds{1};
  };

  void extend_to(std::int64_t n) const;

  double c_;
  double beta_;
  std::shared_ptr<Cache> cache_;
};

inline std::vector<std::int64_t> boundaries_upto(const BatchSchedule& s, std::int64_t n) {
  return s.boundaries_upto(n);
}
inline BlockPosition block_index(const BatchSchedule& s, std::int64_t k) { return s.block_index(k); }

/// Streaming walk over k = 1, 2, ... reporting each iterate's block.
/// Single owner; O(1) per step and no allocation.
class BlockCursor {
 public:
  explicit BlockCursor(const BatchSchedule& schedule);

  BlockPosition advance();
  std::int64_t k() const { return k_; }

 private:
  BatchSchedule schedule_;
  std::int64_t k_ = 0;
  std::int64_t m_ = 1;
  std::int64_t current_ = 1;
  std::int64_t next_;
};

/// beta must exceed 1 / (1 - alpha) for the covariance estimator to be consistent.
bool batch_exponent_admissible(double alpha, double beta);

}  // namespace sacovest
