#pragma once

// Inexact proximal augmented Lagrangian outer loop. Each outer iteration
// warm-starts PGN at (u^k, z^k), accepts the first inner iterate meeting the
// inexactness test, then takes the multiplier step z += rho (A w + 1 - xi).

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "hmsvm/model.hpp"
#include "hmsvm/pgn.hpp"

namespace hmsvm {

enum class GammaRule {
  HeuristicMinRowNorm,  ///< 0.1 * min_i ||a_i||
  Explicit,
};

enum class ThetaRule {
  LambdaOverK,  ///< theta_k = lambda / k, k = 1, 2, ...
  Explicit,     ///< user sequence; its last value repeats once exhausted
};

struct IpalConfig {
  double c1 = 0.1;
  double c2 = 0.1;
  GammaRule gamma_rule = GammaRule::HeuristicMinRowNorm;
  double gamma = 0.0;  ///< used with GammaRule::Explicit
  ThetaRule theta_rule = ThetaRule::LambdaOverK;
  std::vector<double> theta_sequence;  ///< used with ThetaRule::Explicit
  double stop_tol = 1e-3;
  std::size_t max_outer = 1000;
  PgnConfig pgn;
  double alpha_vfc = 0.0;  ///< 0 uses the PGN alpha
  double zero_tol = kDefaultZeroTol;
  bool record_iterates = false;  ///< store (u^{k+1}, z^{k+1}) in the outer trace

  bool operator==(const IpalConfig&) const = default;
};

struct DerivedParams {
  double gamma_hat = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double eta = 0.0;
  double rho_floor = 0.0;
  bool certified = false;  ///< rho >= rho_floor
};

DerivedParams derive_params(const ProblemData& p, const IpalConfig& cfg);

/// z + rho (A w + 1 - xi)
Vector multiplier_update(const ProblemData& p, const PrimalDualState& u, double rho);

/// Relative change test (|dw| + |dxi| + |dz|) / (|w| + |xi| + |z|) < tol; when
/// the denominator is below 1e-15 the numerator is compared to tol directly.
bool stopping_check(const PrimalDualState& prev, const PrimalDualState& curr, double tol);

double theta_at(const IpalConfig& cfg, double lambda, std::size_t k);

struct OuterTraceEntry {
  std::size_t k = 0;  ///< 1-based outer iteration
  VfcReport vfc;
  double lyapunov_eta = 0.0;  ///< M_{rho,eta}(u^{k+1}, z^{k+1}, w^k)
  double lyapunov_mu = 0.0;   ///< M_{rho,mu}(u^{k+1}, z^k, w^k), the inner acceptance value
  double primal_change = 0.0; ///< ||w^{k+1} - w^k||
  double xi_change = 0.0;
  double dual_change = 0.0;
  double theta = 0.0;
  ResidualReport residuals;   ///< inner residuals at u^{k+1}
  std::size_t inner_iters = 0;
  std::size_t newton_steps = 0;
  std::size_t gradient_steps = 0;
  PgnTermination inner_termination = PgnTermination::MaxIters;
  double wall_ms = 0.0;
  std::size_t nnz = 0;
  std::size_t nsv = 0;
  std::optional<PrimalDualState> iterate;  ///< when record_iterates is set
};

enum class Termination { Converged, Stationary, MaxOuter };

const char* to_string(Termination t);

struct SolveReport {
  Termination termination = Termination::MaxOuter;
  DerivedParams derived;
  PgnConfig pgn;  ///< resolved step sizes and sigma_g
  double lipschitz = 0.0;
  double alpha_vfc = 0.0;
  double lyapunov_initial = 0.0;  ///< M_{rho,eta}(u^0, z^0, w^0)
  std::vector<OuterTraceEntry> trace;
  double total_ms = 0.0;
};

struct SolveResult {
  PrimalDualState state;
  SolveReport report;
};

using TraceCallback = std::function<void(const OuterTraceEntry&)>;

/// Runs the outer loop from (w, xi, z) = 0. Non-convergence is reported in
/// `report.termination`, never thrown.
SolveResult solve(const ProblemData& p, const IpalConfig& cfg, const TraceCallback& on_iter = {});

}  // namespace hmsvm
