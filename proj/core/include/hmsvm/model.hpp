#pragma once

// Problem data for the cardinality-constrained 0/1-loss SVM in merged form,
// the smooth part g of the augmented-Lagrangian subproblem, and the
// diagnostics built on it (inexactness residuals, Lyapunov value, VFC).
//
// Variables: w in R^d (features plus intercept, d = n_features + 1),
// xi in R^m (slack), z in R^m (multiplier). Row i of A is -y_i [x_i^T, 1].

#include <cstddef>
#include <span>
#include <vector>

#include "hmsvm/data.hpp"
#include "hmsvm/linalg.hpp"

namespace hmsvm {

struct ModelParams {
  double lambda = 1.0;
  double rho = 1.0;
  double mu = 1e-2;
  std::size_t s = 20;
  /// When false the intercept is exempt from the cardinality constraint and
  /// always kept in the active feature set.
  bool sparsify_intercept = true;

  bool operator==(const ModelParams&) const = default;
};

class ProblemData {
 public:
  /// Assembles A from raw features and +-1 labels; validates the parameters.
  ProblemData(const Matrix& features, std::span<const int> labels, ModelParams params);

  const Matrix& A() const noexcept { return a_; }
  std::span<const int> labels() const noexcept { return labels_; }
  const ModelParams& params() const noexcept { return params_; }

  std::size_t m() const noexcept { return a_.rows(); }
  std::size_t d() const noexcept { return a_.cols(); }
  std::size_t n_features() const noexcept { return a_.cols() - 1; }
  Index intercept_index() const noexcept { return a_.cols() - 1; }

 private:
  Matrix a_;
  std::vector<int> labels_;
  ModelParams params_;
};

ProblemData build_problem(const Dataset& data, const ModelParams& params);

/// Number of nonzeros of w that count against s.
std::size_t constrained_nnz(const ProblemData& p, std::span<const double> w);
/// Active feature set for a gradient point: the s largest |w_hat| (lowest
/// index on ties) among the constrained coordinates, plus the intercept when
/// it is exempt. Ascending.
IndexSet select_support(const ProblemData& p, std::span<const double> w_hat);
/// Euclidean projection onto the feasible sparse set.
Vector project_feasible(const ProblemData& p, std::span<const double> w);

struct Primal {
  Vector w;
  Vector xi;

  bool operator==(const Primal&) const = default;
};

struct PrimalDualState {
  Vector w;
  Vector xi;
  Vector z;

  static PrimalDualState zeros(const ProblemData& p);
  Primal primal() const { return {w, xi}; }
  bool operator==(const PrimalDualState&) const = default;
};

/// Anchors of the k-th subproblem g_k: proximal center w^k and multiplier z^k.
struct SubproblemContext {
  Vector anchor_w;
  Vector anchor_z;
  double rho = 1.0;
  double mu = 1e-2;
  double lambda = 1.0;

  /// Context anchored at `state` with the problem's own rho, mu, lambda.
  static SubproblemContext anchored_at(const ProblemData& p, const PrimalDualState& state);
};

struct Gradient {
  Vector w;
  Vector xi;
  Vector z_trial;  ///< anchor_z + rho (A w + 1 - xi)
};

/// A w + 1 - xi
Vector constraint_residual(const ProblemData& p, const Primal& u);

Gradient grad_g(const SubproblemContext& ctx, const ProblemData& p, const Primal& u);

/// Hessian of g (constant) applied to (dw, dxi).
Primal hessian_apply(const SubproblemContext& ctx, const ProblemData& p, const Primal& d);

double eval_g(const SubproblemContext& ctx, const ProblemData& p, const Primal& u);
/// g + lambda J(xi); throws InfeasibleSparsity when w is not s-sparse.
double eval_G(const SubproblemContext& ctx, const ProblemData& p, const Primal& u);

/// Augmented Lagrangian plus (eta/2) ||w - v_anchor||^2.
double lyapunov(const ProblemData& p, const Primal& u, std::span<const double> z,
                std::span<const double> v_anchor, double eta);

struct ResidualReport {
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
  IndexSet T;
  IndexSet Gamma;
};

/// Inexactness residuals of the subproblem at u for step sizes alpha, beta.
/// Gamma uses the closed convention (-inf, 0] U [sqrt(2 beta lambda), inf).
ResidualReport residuals(const SubproblemContext& ctx, const ProblemData& p, const Primal& u,
                         double alpha, double beta);

struct VfcReport {
  double dist_p = 0.0;
  double dist_d = 0.0;
  double dist_c = 0.0;
  double vfc = 0.0;
};

/// Violation of the first-order (P-stationarity) conditions of the full problem.
VfcReport vfc(const ProblemData& p, const PrimalDualState& state, double alpha);

struct Metrics {
  double acc = 0.0;       ///< 1 - J(A w) / m; zero margins count as correct
  double sign_acc = 0.0;  ///< sign(x^T w + b) vs label, score 0 predicts +1
  std::size_t nnz = 0;    ///< nonzero feature weights (intercept excluded)
  std::size_t nsv = 0;    ///< nonzero multipliers

  bool operator==(const Metrics&) const = default;
};

inline constexpr double kDefaultZeroTol = 1e-8;

Metrics metrics(const ProblemData& p, const PrimalDualState& state,
                double zero_tol = kDefaultZeroTol);

}  // namespace hmsvm
