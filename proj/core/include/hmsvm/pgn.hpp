#pragma once

// Projected gradient-Newton inner solver for the augmented-Lagrangian
// subproblem  min_u g_k(u) + delta_S(w) + lambda J(xi).
//
// Each iteration identifies the active sets from a gradient point, takes the
// projected/proximal gradient step, then tries a Newton step on the subspace
// {w off T = 0, xi off Gamma = 0} and keeps it when it decreases G enough.

#include <cstddef>
#include <optional>
#include <vector>

#include "hmsvm/linalg.hpp"
#include "hmsvm/model.hpp"

namespace hmsvm {

/// How default step sizes are derived from the Hessian of g.
enum class StepRule {
  /// alpha = beta = safety / l_g with the scalar bound from lipschitz_bound.
  SharedLipschitz,
  /// Per-block majorizer diag(L_w I, L_xi I) >= Hessian with
  /// L_w = (1 + mu) + 2 rho ||A||^2 and L_xi = 2 rho.
  BlockLipschitz,
};

struct PgnConfig {
  StepRule step_rule = StepRule::BlockLipschitz;
  double alpha = 0.0;    ///< w step size; 0 selects the step_rule default
  double beta = 0.0;     ///< xi step size; 0 selects the step_rule default
  double sigma_g = 0.0;  ///< Newton acceptance constant; 0 selects default_sigma_g
  std::size_t max_iters = 1000;
  double lipschitz_safety = 0.99;
  bool record_iterates = false;  ///< keep every iterate in the trace
  /// When the full Newton step is rejected, retry it on the face where
  /// crossing slacks are pinned at zero, then shortened to the first point
  /// where a negative slack on Gamma reaches zero.
  bool truncate_newton = true;

  bool operator==(const PgnConfig&) const = default;
};

/// Upper bound on the spectral norm of the (constant) Hessian of g:
/// (1 + mu) + rho (1 + ||A||)^2 with ||A|| <= sqrt(||A||_1 ||A||_inf).
double lipschitz_bound(const ProblemData& p, double mu);
/// Same bound for a given ||A||.
double lipschitz_bound(double norm_a, double rho, double mu);

/// min(1 + mu, rho gamma^2 / (1 + ||A||^2)) clipped to [1e-8, 1 + mu].
double default_sigma_g(const ProblemData& p, double mu, double gamma_hat);

struct BlockSteps {
  double alpha_max = 0.0;  ///< 1 / L_w
  double beta_max = 0.0;   ///< 1 / L_xi
};

/// Largest block step sizes for which diag(1/alpha, 1/beta) dominates the Hessian.
BlockSteps block_step_limits(const ProblemData& p, double mu);

/// Fills zero-valued step sizes and sigma_g; rejects explicit step sizes
/// outside the admissible range of the chosen rule.
PgnConfig resolve_pgn_config(const ProblemData& p, const PgnConfig& cfg, double mu,
                             double gamma_hat);

enum class StepKind { Gradient, Newton };

struct ActiveSets {
  IndexSet T;
  IndexSet Gamma;  ///< open convention: xi_hat in (-inf, 0) U (sqrt(2 lambda beta), inf)
  Vector w_hat;
  Vector xi_hat;
};

ActiveSets identify(const SubproblemContext& ctx, const ProblemData& p, const Primal& u,
                    double alpha, double beta);
ActiveSets identify(const SubproblemContext& ctx, const ProblemData& p, const Primal& u,
                    const Gradient& grad, double alpha, double beta);

/// u_half: w_hat kept on T, xi_hat kept on Gamma, zero elsewhere.
Primal gradient_step(const ActiveSets& sets);

/// Cholesky factor of (mu + 1) I + rho A_{Gbar,T}^T A_{Gbar,T}, reused while
/// (T, Gamma, mu, rho) stay the same.
class NewtonSystemCache {
 public:
  const Cholesky& factor(const SubproblemContext& ctx, const ProblemData& p, const IndexSet& T,
                         const IndexSet& Gamma);
  std::size_t factorizations() const noexcept { return factorizations_; }

 private:
  IndexSet T_;
  IndexSet Gamma_;
  double mu_ = 0.0;
  double rho_ = 0.0;
  std::optional<Cholesky> factor_;
  std::size_t factorizations_ = 0;
};

struct NewtonResult {
  Primal u_tilde;
  Vector d_w;   ///< ordered as T
  Vector d_xi;  ///< ordered as Gamma
  double residual = 0.0;  ///< ||H d - b|| on the reduced block
};

/// Reduced Newton step from u_half via the Schur complement on the xi block.
NewtonResult newton_step(const SubproblemContext& ctx, const ProblemData& p, const Primal& u_half,
                         const IndexSet& T, const IndexSet& Gamma,
                         NewtonSystemCache* cache = nullptr);

/// Largest t in (0, 1] such that no xi_i, i in Gamma, goes from negative at
/// u_half to positive along u_half + t (u_tilde - u_half).
double sign_preserving_scale(const Primal& u_half, const Primal& u_tilde, const IndexSet& Gamma);
/// Coordinates of Gamma that reach zero at scale t.
IndexSet blocking_indices(const Primal& u_half, const Primal& u_tilde, const IndexSet& Gamma,
                          double t);

/// Slacks in Gamma that go from nonpositive at u_half to positive at u_tilde.
IndexSet crossing_indices(const Primal& u_half, const Primal& u_tilde, const IndexSet& Gamma);

struct FaceNewtonResult {
  Primal u;
  std::size_t pinned = 0;  ///< slacks fixed at zero along the path
  std::size_t rounds = 0;  ///< Newton solves after the initial one
};

/// Active-set path from u_half towards the Newton point u_tilde: moves to the
/// first point where a nonpositive slack in Gamma reaches zero, pins it there,
/// drops it from Gamma and re-solves the reduced system from that point.
/// Stops at a Newton point with no crossing slack, or at the breakpoint
/// reached after `max_rounds` re-solves. g never increases along the path and
/// no slack becomes positive, so G(u) <= G(u_half).
FaceNewtonResult face_newton_step(const SubproblemContext& ctx, const ProblemData& p,
                                  const Primal& u_half, const Primal& u_tilde, const IndexSet& T,
                                  const IndexSet& Gamma, std::size_t max_rounds,
                                  NewtonSystemCache* cache = nullptr);

/// Newton is kept iff G_half - G_tilde >= (sigma_g / 4) dist_sq.
bool accept_newton(double G_half, double G_tilde, double dist_sq, double sigma_g);

struct PgnTraceEntry {
  std::size_t iter = 0;
  StepKind step_kind = StepKind::Gradient;
  double G_before = 0.0;
  double G_half = 0.0;   ///< G at the gradient point u^{j+1/2}
  double G_value = 0.0;
  std::size_t T_size = 0;
  std::size_t Gamma_size = 0;
  ResidualReport residuals;      ///< at the new iterate
  double newton_residual = 0.0;
  double newton_scale = 1.0;     ///< step length used for an accepted Newton step
  std::size_t face_pinned = 0;   ///< slacks pinned at zero by an accepted face step
  double half_dist_sq = 0.0;     ///< ||u^{j+1/2} - u^j||^2
  double newton_dist_sq = 0.0;   ///< ||u^{j+1} - u^{j+1/2}||^2, zero for gradient steps
  std::optional<Primal> iterate; ///< u^{j+1} when record_iterates is set
};

/// Stopping targets handed down by the outer loop.
struct InexactnessCriteria {
  double c1 = 0.1;
  double c2 = 0.1;
  double theta = 1.0;
  /// G at the outer iterate u^k; defaults to G(u0).
  std::optional<double> reference_G;
};

enum class PgnTermination { CriteriaMet, Stationary, MaxIters };

const char* to_string(PgnTermination t);

struct SubproblemResult {
  Primal u;
  double G_value = 0.0;
  ResidualReport residuals;
  PgnTermination termination = PgnTermination::MaxIters;
  std::size_t newton_steps = 0;
  std::size_t gradient_steps = 0;
  std::vector<PgnTraceEntry> trace;

  std::size_t iterations() const noexcept { return trace.size(); }
};

/// True when u meets every line of the outer inexactness test.
bool criteria_met(const ProblemData& p, const SubproblemContext& ctx, const Primal& u,
                  double G_value, const ResidualReport& res, const InexactnessCriteria& crit,
                  double reference_G);

/// Runs PGN from u0 (which must be s-sparse) until the inexactness criteria
/// hold, the iterates stall (||u^{j+1} - u^j|| <= 1e-12), or max_iters.
/// `cfg` must be resolved (positive alpha, beta, sigma_g).
SubproblemResult solve_subproblem(const SubproblemContext& ctx, const ProblemData& p,
                                  const PgnConfig& cfg, const Primal& u0,
                                  const InexactnessCriteria& crit,
                                  NewtonSystemCache* cache = nullptr);

}  // namespace hmsvm
