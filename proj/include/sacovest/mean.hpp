#pragma once

#include <cstdint>

#include "sacovest/numerics.hpp"

namespace sacovest {

/// Running arithmetic mean of the iterates fed so far.
template <typename Scalar = double>
struct MeanState {
  std::int64_t count = 0;
  Vec<Scalar> mean;

  explicit MeanState(Eigen::Index dim = 0) : mean(Vec<Scalar>::Zero(dim)) {}

  template <typename Derived>
  void update(const Eigen::MatrixBase<Derived>& x) {
    if (x.size() != mean.size()) throw DimensionMismatch("MeanState: dimension mismatch");
    ++count;
    mean += (x.template cast<Scalar>() - mean) / static_cast<Scalar>(count);
  }
};

template <typename Scalar, typename Derived>
MeanState<Scalar> update_mean(MeanState<Scalar> state, const Eigen::MatrixBase<Derived>& x) {
  state.update(x);
  return state;
}

}  // namespace sacovest
