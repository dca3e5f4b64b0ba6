#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "sacovest/errors.hpp"

namespace sacovest {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = Vec<double>;
using Matrix = Mat<double>;

/// Throws NonFiniteInput if any entry is NaN or infinite.
template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const std::string& what) {
  if (!m.allFinite()) throw NonFiniteInput(what + ": non-finite entry");
}

/// Solves A X = B by Gaussian elimination with partial pivoting.
///
/// A need not be symmetric. A pivot whose magnitude falls below
/// 1e-12 times the largest initial |entry| of A is treated as singular.
template <typename DerivedA, typename DerivedB>
Mat<typename DerivedA::Scalar> solve_linear(const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  if (a.rows() != a.cols()) throw DimensionMismatch("solve_linear: A must be square");
  if (a.rows() != b.rows()) throw DimensionMismatch("solve_linear: row count of B differs from A");
  require_finite(a, "solve_linear A");
  require_finite(b, "solve_linear B");
  if (a.rows() == 0) return Mat<Scalar>(0, b.cols());

  const Scalar scale = a.cwiseAbs().maxCoeff();
  if (scale == Scalar(0)) throw SingularMatrix("solve_linear: zero matrix");
  Eigen::PartialPivLU<Mat<Scalar>> lu(a);
  // The diagonal of the U factor holds the elimination pivots.
  const Scalar min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot < Scalar(1e-12) * scale) {
    throw SingularMatrix("solve_linear: pivot magnitude below tolerance");
  }
  return lu.solve(b.template cast<Scalar>());
}

/// Largest singular value via power iteration on A^T A.
///
/// The iteration runs on P = (A^T A)^256, formed by repeated squaring, so
/// nearly tied top singular values still separate within a few hundred
/// steps; the estimate is the Rayleigh quotient of A^T A itself. Starts from
/// the all-ones vector and re-seeds when that start is annihilated.
template <typename Derived>
typename Derived::Scalar operator_norm(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  require_finite(a, "operator_norm");
  if (a.size() == 0) return Scalar(0);
  const Scalar scale = a.cwiseAbs().maxCoeff();
  if (scale == Scalar(0)) return Scalar(0);
  const Mat<Scalar> m = a / scale;
  const Mat<Scalar> gram = m.transpose() * m;
  const Eigen::Index n = gram.cols();

  constexpr int kSquarings = 8;
  Mat<Scalar> power = gram;
  for (int j = 0; j < kSquarings; ++j) {
    power = power * power;
    const Scalar top = power.cwiseAbs().maxCoeff();
    if (top == Scalar(0)) break;
    power /= top;
  }

  constexpr int kMaxIter = 10000;
  auto iterate = [&](Vec<Scalar> v) -> Scalar {
    v.normalize();
    Scalar est = Scalar(-1);
    for (int it = 0; it < kMaxIter; ++it) {
      Vec<Scalar> w = power * v;
      const Scalar wn = w.norm();
      if (wn == Scalar(0)) return Scalar(0);
      v = w / wn;
      const Scalar next = v.dot(gram * v);
      if (std::abs(next - est) <= Scalar(1e-14) * next) return next;
      est = next;
    }
    throw NonConvergence("operator_norm: power iteration did not stabilize");
  };

  Scalar lambda = iterate(Vec<Scalar>::Ones(n));
  if (lambda == Scalar(0)) {
    Vec<Scalar> v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = (i % 2 == 0 ? Scalar(1) : Scalar(-1)) * Scalar(i + 1);
    lambda = iterate(v);
    if (lambda == Scalar(0)) {
      // Both starts annihilated: fall back to the canonical basis.
      for (Eigen::Index i = 0; i < n && lambda == Scalar(0); ++i) {
        lambda = iterate(Vec<Scalar>::Unit(n, i));
      }
    }
  }
  return scale * std::sqrt(lambda);
}

template <typename Derived>
Mat<typename Derived::Scalar> spd_factor(const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  if (s.rows() != s.cols()) throw DimensionMismatch("spd_factor: matrix must be square");
  require_finite(s, "spd_factor");
  if (s.rows() == 0) return Mat<Scalar>(0, 0);
  Eigen::LLT<Mat<Scalar>> llt(s);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("spd_factor: non-positive pivot during factorization");
  }
  return llt.matrixL();
}

/// Symmetric part (A + A^T) / 2.
template <typename Derived>
Mat<typename Derived::Scalar> symmetrized(const Eigen::MatrixBase<Derived>& a) {
  return (a + a.transpose()) / typename Derived::Scalar(2);
}

}  // namespace sacovest
