#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <vector>

#include "sacovest/errors.hpp"
#include "sacovest/numerics.hpp"

namespace sacovest {

/// Proximal map of theta * ||.||_1: sign(x_i) max(|x_i| - theta, 0).
template <typename Derived>
Vec<typename Derived::Scalar> soft_threshold(const Eigen::MatrixBase<Derived>& x,
                                             typename Derived::Scalar theta) {
  using Scalar = typename Derived::Scalar;
  if (theta < Scalar(0)) throw OutOfDomain("soft_threshold: theta must be nonnegative");
  Vec<Scalar> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar mag = std::abs(x(i)) - theta;
    out(i) = mag > Scalar(0) ? (x(i) > Scalar(0) ? mag : -mag) : Scalar(0);
  }
  return out;
}

/// Euclidean projection onto the probability simplex {x >= 0, sum x = 1}.
/// Sort-based, O(d log d).
template <typename Derived>
Vec<typename Derived::Scalar> project_simplex(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index d = v.size();
  if (d < 1) throw DimensionMismatch("project_simplex: empty vector");
  std::vector<Scalar> u(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) u[static_cast<std::size_t>(i)] = v(i);
  std::sort(u.begin(), u.end(), std::greater<>());
  Scalar cumsum = Scalar(0);
  Scalar theta = Scalar(0);
  for (Eigen::Index j = 0; j < d; ++j) {
    cumsum += u[static_cast<std::size_t>(j)];
    const Scalar candidate = (cumsum - Scalar(1)) / static_cast<Scalar>(j + 1);
    if (u[static_cast<std::size_t>(j)] - candidate > Scalar(0)) theta = candidate;
  }
  return (v.array() - theta).cwiseMax(Scalar(0)).matrix();
}

/// Entrywise clamp onto [lo, hi].
template <typename D1, typename D2, typename D3>
Vec<typename D1::Scalar> project_box(const Eigen::MatrixBase<D1>& v, const Eigen::MatrixBase<D2>& lo,
                                     const Eigen::MatrixBase<D3>& hi) {
  if (v.size() != lo.size() || v.size() != hi.size()) {
    throw DimensionMismatch("project_box: bound dimensions differ from point");
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (lo(i) > hi(i)) throw InvalidBounds("project_box: lo exceeds hi at coordinate " + std::to_string(i));
  }
  return v.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace sacovest
