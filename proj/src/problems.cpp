#include "sacovest/problems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "sacovest/errors.hpp"
#include "sacovest/limiting_sigma.hpp"
#include "sacovest/prox.hpp"

namespace sacovest {

namespace {

constexpr double kDomainTol = 1e-9;
constexpr double kComplementarityTol = 1e-8;
// Entropy gradients are evaluated at max(p, kLogFloor) so boundary iterates stay finite.
constexpr double kLogFloor = 1e-12;

double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

ProblemId id_of(const ProblemParams& p) {
  return std::visit(
      [](const auto& v) -> ProblemId {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, L1QuadParams>) return ProblemId::L1Quad;
        if constexpr (std::is_same_v<T, BoxQpParams>) return ProblemId::BoxQP;
        if constexpr (std::is_same_v<T, GameParams>) return ProblemId::EntropyGame;
        return ProblemId::NonconvexParabola;
      },
      p);
}

Eigen::Index dim_of(const ProblemParams& p) {
  return std::visit(
      [](const auto& v) -> Eigen::Index {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, L1QuadParams>) return v.b.size();
        if constexpr (std::is_same_v<T, BoxQpParams>) return v.c.size();
        if constexpr (std::is_same_v<T, GameParams>) return 2 * v.payoff.rows();
        return 2;
      },
      p);
}

void validate(const L1QuadParams& p) {
  if (p.b.size() < 1) throw ValidationError("l1quad: dimension must be positive");
  if (p.q_diag.size() != p.b.size()) throw ValidationError("l1quad: q and b must have equal length");
  if (!(p.q_diag.array() > 0.0).all()) throw ValidationError("l1quad: q entries must be positive");
  if (!(p.lambda > 0.0)) throw ValidationError("l1quad: lambda must be positive");
  require_finite(p.b, "l1quad b");
  require_finite(p.q_diag, "l1quad q");
}

void validate(const BoxQpParams& p) {
  const Eigen::Index d = p.c.size();
  if (d < 1) throw ValidationError("boxqp: dimension must be positive");
  if (p.q.rows() != d || p.q.cols() != d || p.lo.size() != d || p.hi.size() != d) {
    throw ValidationError("boxqp: q, c, lo, hi dimensions disagree");
  }
  require_finite(p.q, "boxqp q");
  require_finite(p.c, "boxqp c");
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(p.lo(i) < p.hi(i))) throw InvalidBounds("boxqp: lo must be below hi at coordinate " + std::to_string(i));
  }
  if ((p.q - p.q.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw ValidationError("boxqp: q must be symmetric");
  try {
    spd_factor(p.q);
  } catch (const NotPositiveDefinite&) {
    throw ValidationError("boxqp: q must be positive definite");
  }
}

void validate(const GameParams& p) {
  if (p.payoff.rows() < 2 || p.payoff.rows() != p.payoff.cols()) {
    throw ValidationError("game: payoff must be square with at least 2 actions");
  }
  require_finite(p.payoff, "game payoff");
  if (!(p.lambda > 0.0)) throw ValidationError("game: lambda must be positive");
}

void validate(const ParabolaParams&) {}

/// Operator of the game, (-A w + lambda (log z + 1), A^T z + lambda (log w + 1)).
void game_operator(const GameParams& p, const Vector& x, Vector& out) {
  const Eigen::Index d = p.payoff.rows();
  const auto z = x.head(d);
  const auto w = x.tail(d);
  out.resize(2 * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    double aw = 0.0;
    double atz = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      aw += p.payoff(i, j) * w(j);
      atz += p.payoff(j, i) * z(j);
    }
    out(i) = -aw + p.lambda * (std::log(std::max(z(i), kLogFloor)) + 1.0);
    out(d + i) = atz + p.lambda * (std::log(std::max(w(i), kLogFloor)) + 1.0);
  }
}

double cubic(double y, double lin, double b) { return 2.0 * y * y * y + lin * y - b; }

/// Root of 2y^3 + lin*y - b on [lo, hi] given a sign change; Newton with bisection fallback.
double safeguarded_newton(double lo, double hi, double lin, double b) {
  double flo = cubic(lo, lin, b);
  if (flo == 0.0) return lo;
  if (cubic(hi, lin, b) == 0.0) return hi;
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fy = cubic(y, lin, b);
    if (fy == 0.0) return y;
    if ((fy < 0.0) == (flo < 0.0)) {
      lo = y;
      flo = fy;
    } else {
      hi = y;
    }
    const double dfy = 6.0 * y * y + lin;
    double next = dfy != 0.0 ? y - fy / dfy : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) <= 1e-16 * (1.0 + std::abs(y)) || hi - lo <= 1e-16 * (1.0 + std::abs(y))) {
      return next;
    }
    y = next;
  }
  return y;
}

}  // namespace

std::string_view to_string(ProblemId id) {
  switch (id) {
    case ProblemId::L1Quad: return "l1quad";
    case ProblemId::BoxQP: return "boxqp";
    case ProblemId::EntropyGame: return "game";
    case ProblemId::NonconvexParabola: return "parabola";
  }
  return "?";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::ProjectedForward: return "projected_forward";
    case Method::ForwardBackward: return "forward_backward";
    case Method::Subgradient: return "subgradient";
  }
  return "?";
}

std::string_view to_string(SigmaTruthMode m) {
  return m == SigmaTruthMode::Analytic ? "analytic" : "monte_carlo_only";
}

std::optional<ProblemId> problem_id_from_string(std::string_view s) {
  for (auto id : {ProblemId::L1Quad, ProblemId::BoxQP, ProblemId::EntropyGame, ProblemId::NonconvexParabola}) {
    if (to_string(id) == s) return id;
  }
  return std::nullopt;
}

std::optional<Method> method_from_string(std::string_view s) {
  for (auto m : {Method::ProjectedForward, Method::ForwardBackward, Method::Subgradient}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

const std::vector<std::string>& problem_ids() {
  static const std::vector<std::string> ids{"l1quad", "boxqp", "game", "parabola"};
  return ids;
}

NoiseModel NoiseModel::isotropic(Eigen::Index dim, double sigma, double state_scale) {
  if (!(sigma >= 0.0)) throw ValidationError("noise sigma must be nonnegative");
  if (!(state_scale >= 0.0)) throw ValidationError("noise state_scale must be nonnegative");
  return {sigma * Matrix::Identity(dim, dim), state_scale};
}

bool method_admissible(ProblemId id, Method m) {
  switch (id) {
    case ProblemId::L1Quad: return m == Method::ForwardBackward || m == Method::Subgradient;
    case ProblemId::BoxQP:
    case ProblemId::EntropyGame: return m == Method::ProjectedForward;
    case ProblemId::NonconvexParabola: return m == Method::Subgradient;
  }
  return false;
}

L1QuadParams default_l1quad_params() {
  L1QuadParams p;
  p.q_diag = (Vector(5) << 1, 2, 1, 2, 1).finished();
  p.b = (Vector(5) << 2, 1, 0.1, -0.1, -2).finished();
  p.lambda = 1.0;
  return p;
}

BoxQpParams default_boxqp_params() {
  BoxQpParams p;
  p.q = (Matrix(4, 4) << 2.0, 0.5, 0.3, 0.0,
                         0.5, 1.5, 0.0, 0.0,
                         0.3, 0.0, 1.0, 0.2,
                         0.0, 0.0, 0.2, 1.0).finished();
  // Unconstrained minimizer leaves the box above on coordinate 2 and below on coordinate 3.
  p.c = (Vector(4) << 0.4, 0.6, 1.6, -0.5).finished();
  p.lo = Vector::Zero(4);
  p.hi = Vector::Ones(4);
  return p;
}

GameParams default_game_params() {
  GameParams p;
  p.payoff = (Matrix(3, 3) << 0.2, -0.8, 0.6,
                              0.7, 0.1, -0.9,
                             -0.5, 0.9, 0.3).finished();
  p.lambda = 0.2;
  return p;
}

double default_noise_sigma(ProblemId id) {
  switch (id) {
    case ProblemId::L1Quad: return 0.25;
    case ProblemId::BoxQP: return 0.2;
    case ProblemId::EntropyGame: return 0.5;
    case ProblemId::NonconvexParabola: return 0.5;
  }
  return 0.0;
}

Method default_method(ProblemId id) {
  switch (id) {
    case ProblemId::L1Quad: return Method::ForwardBackward;
    case ProblemId::BoxQP:
    case ProblemId::EntropyGame: return Method::ProjectedForward;
    case ProblemId::NonconvexParabola: return Method::Subgradient;
  }
  return Method::Subgradient;
}

Problem Problem::make_default(ProblemId id) {
  ProblemParams params;
  switch (id) {
    case ProblemId::L1Quad: params = default_l1quad_params(); break;
    case ProblemId::BoxQP: params = default_boxqp_params(); break;
    case ProblemId::EntropyGame: params = default_game_params(); break;
    case ProblemId::NonconvexParabola: params = ParabolaParams{}; break;
  }
  const Eigen::Index d = dim_of(params);
  return Problem(std::move(params), default_method(id), NoiseModel::isotropic(d, default_noise_sigma(id)));
}

Problem::Problem(ProblemParams params, Method method, NoiseModel noise)
    : params_(std::move(params)), id_(id_of(params_)), method_(method), noise_(std::move(noise)),
      dim_(dim_of(params_)) {
  std::visit([](const auto& p) { validate(p); }, params_);
  if (!method_admissible(id_, method_)) {
    throw ValidationError(std::string("method ") + std::string(to_string(method_)) + " is not admissible for " +
                          std::string(to_string(id_)));
  }
  if (noise_.factor_l.rows() != dim_ || noise_.factor_l.cols() != dim_) {
    throw ValidationError("noise factor must be d x d");
  }
  if (!(noise_.state_scale >= 0.0)) throw ValidationError("noise state_scale must be nonnegative");
  truth_ = compute_truth();
}

double Problem::recommended_eta() const {
  switch (id_) {
    case ProblemId::L1Quad: return 2.0;
    case ProblemId::BoxQP: return 0.5;
    case ProblemId::EntropyGame: return 0.5;
    case ProblemId::NonconvexParabola: return 2.0;
  }
  return 0.5;
}

Vector Problem::default_x0() const {
  return std::visit(
      [&](const auto& p) -> Vector {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, L1QuadParams>) return Vector::Zero(dim_);
        if constexpr (std::is_same_v<T, BoxQpParams>) return 0.5 * (p.lo + p.hi);
        if constexpr (std::is_same_v<T, GameParams>) {
          return Vector::Constant(dim_, 1.0 / static_cast<double>(p.payoff.rows()));
        }
        return (Vector(2) << 0.5, 0.5).finished();
      },
      params_);
}

void Problem::check_domain(const Vector& x) const {
  if (x.size() != dim_) throw DimensionMismatch("point dimension differs from problem dimension");
  if (!x.allFinite()) throw InfeasibleInput("point has non-finite entries");
  if (const auto* p = std::get_if<BoxQpParams>(&params_)) {
    for (Eigen::Index i = 0; i < dim_; ++i) {
      if (x(i) < p->lo(i) - kDomainTol || x(i) > p->hi(i) + kDomainTol) {
        throw InfeasibleInput("boxqp: coordinate " + std::to_string(i) + " outside the box");
      }
    }
  } else if (const auto* g = std::get_if<GameParams>(&params_)) {
    const Eigen::Index d = g->payoff.rows();
    for (const auto& block : {x.head(d), x.tail(d)}) {
      if (block.minCoeff() < -kDomainTol || std::abs(block.sum() - 1.0) > kDomainTol) {
        throw InfeasibleInput("game: strategy block is not on the simplex");
      }
    }
  }
}

void Problem::next_iterate(double eta, const Vector& x, const Vector& nu, Vector& out) const {
  if (!(eta > 0.0)) throw OutOfDomain("stepsize must be positive");
  if (nu.size() != dim_) throw DimensionMismatch("noise dimension differs from problem dimension");
  check_domain(x);
  out.resize(dim_);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, L1QuadParams>) {
          if (method_ == Method::ForwardBackward) {
            const double theta = eta * p.lambda;
            for (Eigen::Index i = 0; i < dim_; ++i) {
              const double y = x(i) - eta * (p.q_diag(i) * (x(i) - p.b(i)) + nu(i));
              const double mag = std::abs(y) - theta;
              out(i) = mag > 0.0 ? (y > 0.0 ? mag : -mag) : 0.0;
            }
          } else {
            for (Eigen::Index i = 0; i < dim_; ++i) {
              out(i) = x(i) - eta * (p.q_diag(i) * (x(i) - p.b(i)) + p.lambda * sign0(x(i)) + nu(i));
            }
          }
        } else if constexpr (std::is_same_v<T, BoxQpParams>) {
          for (Eigen::Index i = 0; i < dim_; ++i) {
            double grad = 0.0;
            for (Eigen::Index j = 0; j < dim_; ++j) grad += p.q(i, j) * (x(j) - p.c(j));
            out(i) = std::clamp(x(i) - eta * (grad + nu(i)), p.lo(i), p.hi(i));
          }
        } else if constexpr (std::is_same_v<T, GameParams>) {
          const Eigen::Index d = p.payoff.rows();
          game_operator(p, x, out);
          out = x - eta * (out + nu);
          out.head(d) = project_simplex(out.head(d));
          out.tail(d) = project_simplex(out.tail(d));
        } else {
          const double s = sign0(x(0) - x(1) * x(1));
          out(0) = x(0) - eta * (s + x(0) + nu(0));
          out(1) = x(1) - eta * (-2.0 * x(1) * s + x(1) + nu(1));
        }
      },
      params_);
}

Vector Problem::step_map(double eta, const Vector& x, const Vector& nu) const {
  Vector next;
  next_iterate(eta, x, nu, next);
  return (x - next) / eta;
}

Vector Problem::manifold_operator(const Vector& x) const {
  if (x.size() != dim_) throw DimensionMismatch("point dimension differs from problem dimension");
  return std::visit(
      [&](const auto& p) -> Vector {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, L1QuadParams>) {
          // Near x* on M the l1 term is smooth with gradient lambda sign(x*).
          Vector out = p.q_diag.cwiseProduct(x - p.b);
          for (Eigen::Index i = 0; i < dim_; ++i) out(i) += p.lambda * sign0(truth_.x_star(i));
          return out;
        } else if constexpr (std::is_same_v<T, BoxQpParams>) {
          return p.q * (x - p.c);
        } else if constexpr (std::is_same_v<T, GameParams>) {
          Vector out;
          game_operator(p, x, out);
          return out;
        } else {
          // Smooth part plus the zero multiplier of |x - y^2| at the origin.
          return x;
        }
      },
      params_);
}

Vector Problem::project_manifold(const Vector& x) const {
  if (x.size() != dim_) throw DimensionMismatch("point dimension differs from problem dimension");
  return std::visit(
      [&](const auto& p) -> Vector {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, L1QuadParams>) {
          Vector y = x;
          for (int i : truth_.active_index_set) y(i) = 0.0;
          return y;
        } else if constexpr (std::is_same_v<T, BoxQpParams>) {
          Vector y = x;
          for (int i : truth_.active_index_set) y(i) = truth_.x_star(i);
          return y;
        } else if constexpr (std::is_same_v<T, GameParams>) {
          const Eigen::Index d = p.payoff.rows();
          Vector y = x;
          y.head(d).array() += (1.0 - x.head(d).sum()) / static_cast<double>(d);
          y.tail(d).array() += (1.0 - x.tail(d).sum()) / static_cast<double>(d);
          return y;
        } else {
          return project_parabola(x(0), x(1));
        }
      },
      params_);
}

bool Problem::on_manifold_exact(const Vector& x) const {
  switch (id_) {
    case ProblemId::L1Quad:
    case ProblemId::BoxQP:
      for (int i : truth_.active_index_set) {
        if (x(i) != truth_.x_star(i)) return false;
      }
      return true;
    case ProblemId::EntropyGame: {
      const Eigen::Index d = dim_ / 2;
      return x.head(d).sum() == 1.0 && x.tail(d).sum() == 1.0;
    }
    case ProblemId::NonconvexParabola: return x(0) == x(1) * x(1);
  }
  return false;
}

void Problem::sample_noise_into(const NoiseModel& model, RngStream& rng, const Vector& x, Vector& out) const {
  const Eigen::Index d = model.factor_l.rows();
  if (d != dim_) throw DimensionMismatch("noise model dimension differs from problem dimension");
  out.resize(d);
  rng.fill_normal(out);
  // In-place lower-triangular product: row i reads only z_0..z_i.
  for (Eigen::Index i = d - 1; i >= 0; --i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j <= i; ++j) acc += model.factor_l(i, j) * out(j);
    out(i) = acc;
  }
  if (model.state_scale > 0.0) {
    const double scale = model.state_scale * (x - truth_.x_star).norm();
    for (Eigen::Index i = 0; i < d; ++i) out(i) += scale * rng.normal();
  }
}

GroundTruth Problem::compute_truth() const {
  GroundTruth t;
  const Matrix noise_cov = noise_.covariance();
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, L1QuadParams>) {
          t.x_star = Vector::Zero(dim_);
          std::vector<int> free;
          for (Eigen::Index i = 0; i < dim_; ++i) {
            const double thresh = p.lambda / p.q_diag(i);
            const double mag = std::abs(p.b(i)) - thresh;
            if (mag > 0.0) {
              t.x_star(i) = p.b(i) > 0.0 ? mag : -mag;
              free.push_back(static_cast<int>(i));
            } else {
              // Inactive: |grad f(x*)_i| = q_i |b_i| must stay strictly inside lambda.
              if (p.q_diag(i) * std::abs(p.b(i)) >= p.lambda - kComplementarityTol) {
                throw StrictComplementarityViolated("l1quad: coordinate " + std::to_string(i) +
                                                    " sits on the threshold");
              }
              t.active_index_set.push_back(static_cast<int>(i));
            }
          }
          const auto r = static_cast<Eigen::Index>(free.size());
          t.tangent_basis = Matrix::Zero(dim_, r);
          t.jacobian_h = Matrix::Zero(r, r);
          for (Eigen::Index j = 0; j < r; ++j) {
            t.tangent_basis(free[static_cast<std::size_t>(j)], j) = 1.0;
            t.jacobian_h(j, j) = p.q_diag(free[static_cast<std::size_t>(j)]);
          }
        } else if constexpr (std::is_same_v<T, BoxQpParams>) {
          // Projected gradient pins down the active face; the free block is then solved exactly.
          const double lip = operator_norm(p.q);
          Vector x = p.c.cwiseMax(p.lo).cwiseMin(p.hi);
          for (int it = 0; it < 1000000; ++it) {
            const Vector next = project_box(Vector(x - (p.q * (x - p.c)) / lip), p.lo, p.hi);
            const double change = (next - x).cwiseAbs().maxCoeff();
            x = next;
            if (change < 1e-15) break;
          }
          std::vector<int> free;
          t.x_star = x;
          for (Eigen::Index i = 0; i < dim_; ++i) {
            if (x(i) <= p.lo(i) + kDomainTol) {
              t.x_star(i) = p.lo(i);
              t.active_index_set.push_back(static_cast<int>(i));
            } else if (x(i) >= p.hi(i) - kDomainTol) {
              t.x_star(i) = p.hi(i);
              t.active_index_set.push_back(static_cast<int>(i));
            } else {
              free.push_back(static_cast<int>(i));
            }
          }
          const auto r = static_cast<Eigen::Index>(free.size());
          t.tangent_basis = Matrix::Zero(dim_, r);
          for (Eigen::Index j = 0; j < r; ++j) t.tangent_basis(free[static_cast<std::size_t>(j)], j) = 1.0;
          if (r > 0) {
            const Matrix& u = t.tangent_basis;
            // Free block stationarity: U^T Q (x - c) = 0 with active coordinates fixed.
            Vector fixed = t.x_star;
            for (int i : free) fixed(i) = 0.0;
            const Matrix qff = u.transpose() * p.q * u;
            const Vector rhs = u.transpose() * p.q * (p.c - fixed);
            t.x_star = fixed + u * solve_linear(qff, rhs);
          }
          const Vector grad = p.q * (t.x_star - p.c);
          for (int i : free) {
            if (t.x_star(i) <= p.lo(i) || t.x_star(i) >= p.hi(i)) {
              throw StrictComplementarityViolated("boxqp: free coordinate " + std::to_string(i) + " hits a bound");
            }
          }
          for (int i : t.active_index_set) {
            const bool at_lower = t.x_star(i) == p.lo(i);
            // Multiplier of the active bound must be strictly positive.
            const double multiplier = at_lower ? grad(i) : -grad(i);
            if (multiplier <= kComplementarityTol) {
              throw StrictComplementarityViolated("boxqp: bound at coordinate " + std::to_string(i) +
                                                  " is weakly active");
            }
          }
          t.jacobian_h = t.tangent_basis.transpose() * p.q * t.tangent_basis;
        } else if constexpr (std::is_same_v<T, GameParams>) {
          const Eigen::Index d = p.payoff.rows();
          const auto [z, w] = qre_oracle(p.payoff, p.lambda, 1e-13);
          t.x_star.resize(2 * d);
          t.x_star << z, w;
          const Matrix block = simplex_tangent_basis(d);
          t.tangent_basis = Matrix::Zero(2 * d, 2 * (d - 1));
          t.tangent_basis.block(0, 0, d, d - 1) = block;
          t.tangent_basis.block(d, d - 1, d, d - 1) = block;
          Matrix jac(2 * d, 2 * d);
          jac << p.lambda * z.cwiseInverse().asDiagonal().toDenseMatrix(), -p.payoff,
                 p.payoff.transpose(), p.lambda * w.cwiseInverse().asDiagonal().toDenseMatrix();
          t.jacobian_h = t.tangent_basis.transpose() * jac * t.tangent_basis;
          // Local strong monotonicity on the tangent product.
          try {
            spd_factor(symmetrized(t.jacobian_h));
          } catch (const NotPositiveDefinite&) {
            throw ValidationError("game: restricted Jacobian is not positive definite on the tangent space");
          }
        } else {
          t.x_star = Vector::Zero(2);
          t.tangent_basis = (Matrix(2, 1) << 0.0, 1.0).finished();
          // Candidate from the restricted dynamics (y^2 + y^4)/2 on x = y^2; Monte Carlo is the reference.
          t.jacobian_h = Matrix::Identity(1, 1);
          t.sigma_mode = SigmaTruthMode::MonteCarloOnly;
        }
      },
      params_);
  t.noise_cov_s = t.tangent_basis.transpose() * noise_cov * t.tangent_basis;
  t.sigma_limit = limiting_sigma(t.tangent_basis, t.jacobian_h, t.noise_cov_s);
  return t;
}

std::pair<Vector, Vector> qre_oracle(const Matrix& payoff, double lambda, double tol) {
  if (!(lambda > 0.0)) throw OutOfDomain("qre_oracle: lambda must be positive");
  if (payoff.rows() != payoff.cols() || payoff.rows() < 1) throw DimensionMismatch("qre_oracle: payoff must be square");
  const Eigen::Index d = payoff.rows();
  auto softmax = [](const Vector& v) {
    Vector e = (v.array() - v.maxCoeff()).exp();
    return Vector(e / e.sum());
  };
  Vector z = Vector::Constant(d, 1.0 / static_cast<double>(d));
  Vector w = z;
  double damping = 0.5;
  constexpr int kWindow = 1000;
  double window_best = std::numeric_limits<double>::infinity();
  double prev_window_best = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= 1000000; ++it) {
    const Vector zn = softmax(payoff * w / lambda);
    const Vector wn = softmax(-(payoff.transpose() * z) / lambda);
    const double update = std::max((zn - z).cwiseAbs().maxCoeff(), (wn - w).cwiseAbs().maxCoeff());
    if (update <= tol) return {zn, wn};
    z = (1.0 - damping) * z + damping * zn;
    w = (1.0 - damping) * w + damping * wn;
    window_best = std::min(window_best, update);
    if (it % kWindow == 0) {
      if (!(window_best < 0.5 * prev_window_best) && damping > 0x1.0p-12) damping *= 0.5;
      prev_window_best = window_best;
      window_best = std::numeric_limits<double>::infinity();
    }
  }
  throw NonConvergence("qre_oracle: no fixed point within 10^6 iterations");
}

Matrix simplex_tangent_basis(Eigen::Index d) {
  Matrix u = Matrix::Zero(d, d - 1);
  for (Eigen::Index j = 0; j < d - 1; ++j) {
    const double k = static_cast<double>(j + 1);
    const double norm = std::sqrt(k * (k + 1.0));
    for (Eigen::Index i = 0; i <= j; ++i) u(i, j) = 1.0 / norm;
    u(j + 1, j) = -k / norm;
  }
  return u;
}

Vector project_parabola(double a, double b) {
  // Stationarity of (y^2 - a)^2 + (y - b)^2: 2y^3 + (1 - 2a) y - b = 0.
  const double lin = 1.0 - 2.0 * a;
  const double reach = 1.0 + std::abs(b) + std::abs(lin);
  std::array<std::pair<double, double>, 3> brackets{};
  std::size_t count = 0;
  if (lin >= 0.0) {
    brackets[count++] = {-reach, reach};
  } else {
    const double c = std::sqrt(-lin / 6.0);
    for (const auto& [lo, hi] : {std::pair{-reach, -c}, std::pair{-c, c}, std::pair{c, reach}}) {
      const double flo = cubic(lo, lin, b);
      const double fhi = cubic(hi, lin, b);
      if ((flo <= 0.0 && fhi >= 0.0) || (flo >= 0.0 && fhi <= 0.0)) brackets[count++] = {lo, hi};
    }
  }
  double best_y = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const double y = safeguarded_newton(brackets[i].first, brackets[i].second, lin, b);
    const double dist = (y * y - a) * (y * y - a) + (y - b) * (y - b);
    if (dist < best) {
      best = dist;
      best_y = y;
    }
  }
  return (Vector(2) << best_y * best_y, best_y).finished();
}

Vector step_map_g(const Problem& problem, double eta, const Vector& x, const Vector& nu) {
  return problem.step_map(eta, x, nu);
}

Vector sample_noise(const Problem& problem, const NoiseModel& model, RngStream& rng, const Vector& x) {
  Vector out;
  problem.sample_noise_into(model, rng, x, out);
  return out;
}

const GroundTruth& ground_truth(const Problem& problem) { return problem.truth(); }

Vector project_manifold(const Problem& problem, const Vector& x) { return problem.project_manifold(x); }

}  // namespace sacovest
