#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sacovest/numerics.hpp"
#include "sacovest/rng.hpp"

namespace sacovest {

enum class ProblemId { L1Quad, BoxQP, EntropyGame, NonconvexParabola };
enum class Method { ProjectedForward, ForwardBackward, Subgradient };

/// How the limiting covariance of a problem is known.
enum class SigmaTruthMode { Analytic, MonteCarloOnly };

std::string_view to_string(ProblemId id);
std::string_view to_string(Method m);
std::string_view to_string(SigmaTruthMode m);
std::optional<ProblemId> problem_id_from_string(std::string_view s);
std::optional<Method> method_from_string(std::string_view s);
/// CLI ids in canonical order: "l1quad", "boxqp", "game", "parabola".
const std::vector<std::string>& problem_ids();

/// Ambient noise nu = factor_l z + state_scale * ||x - x*|| * z' with z, z' standard normal.
struct NoiseModel {
  Matrix factor_l;
  double state_scale = 0.0;

  static NoiseModel isotropic(Eigen::Index dim, double sigma, double state_scale = 0.0);
  Matrix covariance() const { return factor_l * factor_l.transpose(); }
};

struct GroundTruth {
  Vector x_star;
  Matrix tangent_basis;  // U, d x r, orthonormal columns
  Matrix jacobian_h;     // H = U^T (covariant Jacobian) U, r x r
  Matrix noise_cov_s;    // S = U^T Cov(nu) U, r x r
  Matrix sigma_limit;    // U H^{-1} S H^{-T} U^T, d x d
  std::vector<int> active_index_set;
  SigmaTruthMode sigma_mode = SigmaTruthMode::Analytic;

  Eigen::Index dim() const { return x_star.size(); }
  Eigen::Index rank() const { return tangent_basis.cols(); }
};

/// 0.5 (x - b)^T diag(q) (x - b) + lambda ||x||_1.
struct L1QuadParams {
  Vector q_diag;
  Vector b;
  double lambda = 1.0;
};

/// 0.5 (x - c)^T Q (x - c) over the box [lo, hi].
struct BoxQpParams {
  Matrix q;
  Vector c;
  Vector lo;
  Vector hi;
};

/// Entropy-regularized zero-sum matrix game over a pair of simplices.
struct GameParams {
  Matrix payoff;
  double lambda = 0.2;
};

/// |x - y^2| + (x^2 + y^2) / 2, minimized at the origin.
struct ParabolaParams {};

using ProblemParams = std::variant<L1QuadParams, BoxQpParams, GameParams, ParabolaParams>;

/// A zoo problem: SA step map, noise sampler, manifold projection and ground truth.
/// Immutable after construction.
class Problem {
 public:
  Problem(ProblemParams params, Method method, NoiseModel noise);

  static Problem make_default(ProblemId id);

  ProblemId id() const { return id_; }
  Eigen::Index dim() const { return dim_; }
  Method method() const { return method_; }
  const ProblemParams& params() const { return params_; }
  const NoiseModel& noise() const { return noise_; }
  const GroundTruth& truth() const { return truth_; }

  /// Base stepsize that works well for this problem's conditioning.
  double recommended_eta() const;
  Vector default_x0() const;

  /// Throws InfeasibleInput if x is outside dom F by more than 1e-9.
  void check_domain(const Vector& x) const;

  /// Writes x - eta * G_eta(x, nu) into out.
  ///
  /// The prox/projection output is written directly, so exact zeros and
  /// feasibility produced by the inner map survive the update.
  void next_iterate(double eta, const Vector& x, const Vector& nu, Vector& out) const;

  /// G_eta(x, nu).
  Vector step_map(double eta, const Vector& x, const Vector& nu) const;

  /// Smooth extension of F restricted to the active manifold near x*.
  Vector manifold_operator(const Vector& x) const;

  Vector project_manifold(const Vector& x) const;
  /// True when x lies exactly on the active manifold (no tolerance).
  bool on_manifold_exact(const Vector& x) const;

  void sample_noise_into(const NoiseModel& model, RngStream& rng, const Vector& x, Vector& out) const;

 private:
  GroundTruth compute_truth() const;

  ProblemParams params_;
  ProblemId id_;
  Method method_;
  NoiseModel noise_;
  Eigen::Index dim_;
  GroundTruth truth_;
};

bool method_admissible(ProblemId id, Method m);

Vector step_map_g(const Problem& problem, double eta, const Vector& x, const Vector& nu);
Vector sample_noise(const Problem& problem, const NoiseModel& model, RngStream& rng, const Vector& x);
const GroundTruth& ground_truth(const Problem& problem);
Vector project_manifold(const Problem& problem, const Vector& x);

L1QuadParams default_l1quad_params();
BoxQpParams default_boxqp_params();
GameParams default_game_params();
double default_noise_sigma(ProblemId id);
Method default_method(ProblemId id);

/// Quantal response equilibrium: z ∝ exp(A w / lambda), w ∝ exp(-A^T z / lambda).
///
/// Damped fixed-point iteration starting from the uniform pair with damping
/// 0.5; the damping is halved whenever the update fails to shrink over a
/// window. Throws NonConvergence after 10^6 iterations.
std::pair<Vector, Vector> qre_oracle(const Matrix& payoff, double lambda, double tol);

/// Orthonormal basis of {v : sum v = 0} in R^d (Helmert columns), d x (d-1).
Matrix simplex_tangent_basis(Eigen::Index d);

/// Nearest point of the parabola {x = y^2} to (a, b).
Vector project_parabola(double a, double b);

}  // namespace sacovest
