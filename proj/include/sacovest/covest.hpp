#pragma once

#include <cstdint>
#include <vector>

#include "sacovest/errors.hpp"
#include "sacovest/mean.hpp"
#include "sacovest/numerics.hpp"
#include "sacovest/schedules.hpp"

namespace sacovest {

namespace detail {

/// Neumaier-compensated running sum.
template <typename Scalar>
struct CompensatedSum {
  Scalar sum = Scalar(0);
  Scalar comp = Scalar(0);

  void add(Scalar v) {
    const Scalar t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  Scalar value() const { return sum + comp; }
};

}  // namespace detail

/// Online batch-means covariance estimator.
///
/// Every index i contributes the partial block sum s_i = x_{t_i} + ... + x_i
/// of length l_i. The state keeps
///
///   A = sum_i s_i s_i^T,  b = sum_i l_i s_i,  c = sum_i l_i^2,  L = sum_i l_i,
///
/// so that sum_i (s_i - l_i xbar)(s_i - l_i xbar)^T = A - b xbar^T - xbar b^T + c xbar xbar^T
/// is available for any xbar at O(d^2) per update and O(d^2) memory.
template <typename Scalar = double>
class BatchMeans {
 public:
  BatchMeans(Eigen::Index dim, const BatchSchedule& schedule)
      : schedule_(schedule), cursor_(schedule), a_mat_(Mat<Scalar>::Zero(dim, dim)),
        b_vec_(Vec<Scalar>::Zero(dim)), s_cur_(Vec<Scalar>::Zero(dim)) {}

  template <typename Derived>
  void update(const Eigen::MatrixBase<Derived>& x) {
    if (x.size() != s_cur_.size()) throw DimensionMismatch("BatchMeans: dimension mismatch");
    const BlockPosition pos = cursor_.advance();
    ++n_;
    if (pos.is_new_block) {
      s_cur_ = x.template cast<Scalar>();
    } else {
      s_cur_ += x.template cast<Scalar>();
    }
    l_cur_ = pos.length;
    const auto l = static_cast<Scalar>(l_cur_);
    a_mat_.noalias() += s_cur_ * s_cur_.transpose();
    b_vec_ += l * s_cur_;
    c_scalar_.add(l * l);
    l_total_.add(l);
  }

  /// Sigma-hat for the given running mean; read-only, callable mid-run.
  Mat<Scalar> finalize(const MeanState<Scalar>& mean) const {
    if (n_ == 0) throw EmptyState("BatchMeans: no iterates accumulated");
    if (mean.count != n_) throw DimensionMismatch("BatchMeans: mean count differs from estimator count");
    const Vec<Scalar>& xbar = mean.mean;
    Mat<Scalar> m = a_mat_;
    m.noalias() -= b_vec_ * xbar.transpose();
    m.noalias() -= xbar * b_vec_.transpose();
    m.noalias() += c_scalar() * (xbar * xbar.transpose());
    m /= l_total();
    return symmetrized(m);
  }

  std::int64_t n() const { return n_; }
  Eigen::Index dim() const { return s_cur_.size(); }
  const BatchSchedule& schedule() const { return schedule_; }
  const Mat<Scalar>& a_mat() const { return a_mat_; }
  const Vec<Scalar>& b_vec() const { return b_vec_; }
  Scalar c_scalar() const { return c_scalar_.value(); }
  Scalar l_total() const { return l_total_.value(); }
  const Vec<Scalar>& block_sum() const { return s_cur_; }
  std::int64_t block_length() const { return l_cur_; }

 private:
  BatchSchedule schedule_;
  BlockCursor cursor_;
  Mat<Scalar> a_mat_;
  Vec<Scalar> b_vec_;
  Vec<Scalar> s_cur_;
  detail::CompensatedSum<Scalar> c_scalar_;
  detail::CompensatedSum<Scalar> l_total_;
  std::int64_t l_cur_ = 0;
  std::int64_t n_ = 0;
};

template <typename Scalar, typename Derived>
BatchMeans<Scalar> bm_update(BatchMeans<Scalar> state, const Eigen::MatrixBase<Derived>& x) {
  state.update(x);
  return state;
}

template <typename Scalar>
Mat<Scalar> bm_finalize(const BatchMeans<Scalar>& state, const MeanState<Scalar>& mean) {
  return state.finalize(mean);
}

/// Direct evaluation of the batch-means estimator from a stored sequence:
/// materializes each block sum and the centered deviations s_i - l_i xbar.
template <typename Scalar>
Mat<Scalar> bm_direct(const std::vector<Vec<Scalar>>& xs, const BatchSchedule& schedule) {
  if (xs.empty()) throw EmptySequence("bm_direct: empty sequence");
  const auto n = static_cast<std::int64_t>(xs.size());
  const Eigen::Index d = xs.front().size();

  Vec<Scalar> xbar = Vec<Scalar>::Zero(d);
  for (const auto& x : xs) xbar += x;
  xbar /= static_cast<Scalar>(n);

  const std::vector<std::int64_t> bounds = schedule.boundaries_upto(n);
  Mat<Scalar> num = Mat<Scalar>::Zero(d, d);
  Scalar denom = Scalar(0);
  std::size_t block = 0;
  Vec<Scalar> s = Vec<Scalar>::Zero(d);
  for (std::int64_t i = 1; i <= n; ++i) {
    while (block + 1 < bounds.size() && bounds[block + 1] <= i) ++block;
    const std::int64_t t = bounds[block];
    // s = x_t + ... + x_i
    if (t == i) s.setZero();
    s += xs[static_cast<std::size_t>(i - 1)];
    const auto l = static_cast<Scalar>(i - t + 1);
    const Vec<Scalar> dev = s - l * xbar;
    num.noalias() += dev * dev.transpose();
    denom += l;
  }
  return symmetrized(Mat<Scalar>(num / denom));
}

}  // namespace sacovest
