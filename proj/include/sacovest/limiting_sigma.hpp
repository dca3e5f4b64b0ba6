#pragma once

#include "sacovest/errors.hpp"
#include "sacovest/numerics.hpp"

namespace sacovest {

/// Limiting covariance of the averaged iterates, U H^{-1} S H^{-T} U^T.
///
/// H may be non-symmetric; both inverses are applied through solve_linear.
/// A rank-0 basis (x* with no tangent directions) gives the zero matrix.
template <typename DU, typename DH, typename DS>
Mat<typename DU::Scalar> limiting_sigma(const Eigen::MatrixBase<DU>& u, const Eigen::MatrixBase<DH>& h,
                                        const Eigen::MatrixBase<DS>& s) {
  using Scalar = typename DU::Scalar;
  const Eigen::Index d = u.rows();
  const Eigen::Index r = u.cols();
  if (h.rows() != r || h.cols() != r || s.rows() != r || s.cols() != r) {
    throw DimensionMismatch("limiting_sigma: H and S must be r x r with r = cols(U)");
  }
  if (r == 0) return Mat<Scalar>::Zero(d, d);
  const Mat<Scalar> gram = u.transpose() * u;
  if ((gram - Mat<Scalar>::Identity(r, r)).cwiseAbs().maxCoeff() > Scalar(1e-6)) {
    throw NotOrthonormal("limiting_sigma: columns of U are not orthonormal");
  }
  const Mat<Scalar> hinv_s = solve_linear(h, s);                                     // H^{-1} S
  const Mat<Scalar> core = solve_linear(h, hinv_s.transpose()).transpose();          // H^{-1} S H^{-T}
  const Mat<Scalar> sigma = u * core * u.transpose();
  return symmetrized(sigma);
}

}  // namespace sacovest
