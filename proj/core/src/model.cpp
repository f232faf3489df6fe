#include "hmsvm/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hmsvm/errors.hpp"
#include "hmsvm/proxops.hpp"

namespace hmsvm {

namespace {

void check_dims(const ProblemData& p, const Primal& u) {
  if (u.w.size() != p.d() || u.xi.size() != p.m()) {
    throw InputError("primal point does not match problem dimensions");
  }
}

void check_dims(const SubproblemContext& ctx, const ProblemData& p) {
  if (ctx.anchor_w.size() != p.d() || ctx.anchor_z.size() != p.m()) {
    throw InputError("subproblem anchors do not match problem dimensions");
  }
}

}  // namespace

ProblemData::ProblemData(const Matrix& features, std::span<const int> labels, ModelParams params)
    : params_(params) {
  if (features.rows() != labels.size()) throw InputError("build_problem: label count mismatch");
  if (features.cols() == 0) throw InputError("build_problem: at least one feature is required");
  if (labels.empty()) throw InputError("build_problem: at least one sample is required");
  if (!(params.lambda > 0.0) || !(params.rho > 0.0) || !(params.mu > 0.0)) {
    throw InputError("build_problem: lambda, rho and mu must be positive");
  }
  if (params.s < 1) throw InputError("build_problem: s must be at least 1");
  const std::size_t limit = params.sparsify_intercept ? features.cols() + 1 : features.cols();
  if (params.s > limit) {
    throw InputError("build_problem: s = " + std::to_string(params.s) +
                     " exceeds the number of constrained coordinates (" + std::to_string(limit) +
                     ")");
  }

  const std::size_t m = features.rows();
  const std::size_t n = features.cols();
  a_ = Matrix(m, n + 1);
  labels_.assign(labels.begin(), labels.end());
  for (std::size_t i = 0; i < m; ++i) {
    if (labels[i] != 1 && labels[i] != -1) throw InputError("build_problem: labels must be +1 or -1");
    const double sign = -static_cast<double>(labels[i]);
    const auto src = features.row(i);
    auto dst = a_.row(i);
    for (std::size_t j = 0; j < n; ++j) dst[j] = sign * src[j];
    dst[n] = sign;
  }
}

ProblemData build_problem(const Dataset& data, const ModelParams& params) {
  return ProblemData(data.features, data.labels, params);
}

std::size_t constrained_nnz(const ProblemData& p, std::span<const double> w) {
  const std::size_t limit = p.params().sparsify_intercept ? w.size() : p.n_features();
  std::size_t count = 0;
  for (std::size_t i = 0; i < limit; ++i) count += (w[i] != 0.0);
  return count;
}

IndexSet select_support(const ProblemData& p, std::span<const double> w_hat) {
  if (p.params().sparsify_intercept) return largest_support(w_hat, p.params().s);
  IndexSet t = largest_support(w_hat.first(p.n_features()), p.params().s);
  t.push_back(p.intercept_index());
  return t;
}

Vector project_feasible(const ProblemData& p, std::span<const double> w) {
  Vector out(w.size(), 0.0);
  for (Index i : select_support(p, w)) out[i] = w[i];
  return out;
}

PrimalDualState PrimalDualState::zeros(const ProblemData& p) {
  return {Vector(p.d(), 0.0), Vector(p.m(), 0.0), Vector(p.m(), 0.0)};
}

SubproblemContext SubproblemContext::anchored_at(const ProblemData& p,
                                                 const PrimalDualState& state) {
  return {state.w, state.z, p.params().rho, p.params().mu, p.params().lambda};
}

Vector constraint_residual(const ProblemData& p, const Primal& u) {
  check_dims(p, u);
  Vector r = matvec(p.A(), u.w);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += 1.0 - u.xi[i];
  return r;
}

Gradient grad_g(const SubproblemContext& ctx, const ProblemData& p, const Primal& u) {
  check_dims(ctx, p);
  Gradient g;
  g.z_trial = constraint_residual(p, u);
  for (std::size_t i = 0; i < g.z_trial.size(); ++i) {
    g.z_trial[i] = ctx.anchor_z[i] + ctx.rho * g.z_trial[i];
  }
  g.w = matvec_transpose(p.A(), g.z_trial);
  for (std::size_t j = 0; j < g.w.size(); ++j) {
    g.w[j] += u.w[j] + ctx.mu * (u.w[j] - ctx.anchor_w[j]);
  }
  g.xi.resize(g.z_trial.size());
  std::transform(g.z_trial.begin(), g.z_trial.end(), g.xi.begin(), [](double v) { return -v; });
  return g;
}

Primal hessian_apply(const SubproblemContext& ctx, const ProblemData& p, const Primal& d) {
  check_dims(p, d);
  Vector ad = matvec(p.A(), d.w);
  for (std::size_t i = 0; i < ad.size(); ++i) ad[i] = ctx.rho * (ad[i] - d.xi[i]);
  Primal out;
  out.w = matvec_transpose(p.A(), ad);
  for (std::size_t j = 0; j < out.w.size(); ++j) out.w[j] += (1.0 + ctx.mu) * d.w[j];
  out.xi.resize(ad.size());
  std::transform(ad.begin(), ad.end(), out.xi.begin(), [](double v) { return -v; });
  return out;
}

double eval_g(const SubproblemContext& ctx, const ProblemData& p, const Primal& u) {
  check_dims(ctx, p);
  const Vector r = constraint_residual(p, u);
  const double prox = distance(u.w, ctx.anchor_w);
  return 0.5 * squared_norm(u.w) + dot(ctx.anchor_z, r) + 0.5 * ctx.rho * squared_norm(r) +
         0.5 * ctx.mu * prox * prox;
}

double eval_G(const SubproblemContext& ctx, const ProblemData& p, const Primal& u) {
  check_dims(p, u);
  if (constrained_nnz(p, u.w) > p.params().s) {
    throw InfeasibleSparsity("eval_G: ||w||_0 exceeds s");
  }
  return eval_g(ctx, p, u) + ctx.lambda * static_cast<double>(zero_one_count(u.xi));
}

double lyapunov(const ProblemData& p, const Primal& u, std::span<const double> z,
                std::span<const double> v_anchor, double eta) {
  check_dims(p, u);
  if (constrained_nnz(p, u.w) > p.params().s) {
    throw InfeasibleSparsity("lyapunov: ||w||_0 exceeds s");
  }
  const Vector r = constraint_residual(p, u);
  const double prox = distance(u.w, v_anchor);
  return 0.5 * squared_norm(u.w) + dot(z, r) + 0.5 * p.params().rho * squared_norm(r) +
         0.5 * eta * prox * prox +
         p.params().lambda * static_cast<double>(zero_one_count(u.xi));
}

ResidualReport residuals(const SubproblemContext& ctx, const ProblemData& p, const Primal& u,
                         double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw InputError("residuals: alpha and beta must be positive");
  const Gradient g = grad_g(ctx, p, u);

  Vector w_tilde(u.w.size());
  for (std::size_t j = 0; j < w_tilde.size(); ++j) w_tilde[j] = u.w[j] - alpha * g.w[j];
  Vector xi_tilde(u.xi.size());
  for (std::size_t i = 0; i < xi_tilde.size(); ++i) xi_tilde[i] = u.xi[i] - beta * g.xi[i];

  ResidualReport rep;
  rep.T = select_support(p, w_tilde);
  const double nu = std::sqrt(2.0 * beta * ctx.lambda);
  for (std::size_t i = 0; i < xi_tilde.size(); ++i) {
    if (xi_tilde[i] <= 0.0 || xi_tilde[i] >= nu) rep.Gamma.push_back(i);
  }

  double r1 = 0.0;
  std::vector<bool> in_t(u.w.size(), false);
  for (Index j : rep.T) in_t[j] = true;
  for (std::size_t j = 0; j < u.w.size(); ++j) {
    const double v = in_t[j] ? g.w[j] : u.w[j];
    r1 += v * v;
  }
  double r2 = 0.0;
  std::vector<bool> in_gamma(u.xi.size(), false);
  for (Index i : rep.Gamma) in_gamma[i] = true;
  for (std::size_t i = 0; i < u.xi.size(); ++i) {
    const double v = in_gamma[i] ? g.xi[i] : u.xi[i];
    r2 += v * v;
  }
  rep.r1 = std::sqrt(r1);
  rep.r2 = std::sqrt(r2);
  rep.r3 = 0.5 * beta * squared_norm(g.xi) +
           ctx.lambda * static_cast<double>(zero_one_count(u.xi)) -
           moreau_envelope_hard_margin(xi_tilde, beta, ctx.lambda);
  return rep;
}

VfcReport vfc(const ProblemData& p, const PrimalDualState& state, double alpha) {
  if (!(alpha > 0.0)) throw InputError("vfc: alpha must be positive");
  const Primal u{state.w, state.xi};
  VfcReport rep;

  Vector w_step = matvec_transpose(p.A(), state.z);
  for (std::size_t j = 0; j < w_step.size(); ++j) {
    w_step[j] = state.w[j] - alpha * (state.w[j] + w_step[j]);
  }
  rep.dist_p = distance(state.w, project_feasible(p, w_step));

  Vector xi_step(state.xi.size());
  for (std::size_t i = 0; i < xi_step.size(); ++i) xi_step[i] = state.xi[i] + alpha * state.z[i];
  rep.dist_d = distance(state.xi, prox_hard_margin(xi_step, alpha * p.params().lambda).proxed);

  rep.dist_c = norm2(constraint_residual(p, u));
  rep.vfc = std::max({rep.dist_p, rep.dist_d, rep.dist_c});
  return rep;
}

Metrics metrics(const ProblemData& p, const PrimalDualState& state, double zero_tol) {
  if (state.w.size() != p.d()) throw InputError("metrics: weight dimension mismatch");
  const Vector aw = matvec(p.A(), state.w);
  std::size_t loss = 0;
  std::size_t sign_correct = 0;
  for (std::size_t i = 0; i < aw.size(); ++i) {
    loss += aw[i] > 0.0;
    // (A w)_i = -y_i * score_i, and a zero score predicts +1.
    sign_correct += aw[i] < 0.0 || (aw[i] == 0.0 && p.labels()[i] == 1);
  }
  Metrics out;
  const double m = static_cast<double>(p.m());
  out.acc = 1.0 - static_cast<double>(loss) / m;
  out.sign_acc = static_cast<double>(sign_correct) / m;
  for (std::size_t j = 0; j < p.n_features(); ++j) out.nnz += std::abs(state.w[j]) > zero_tol;
  for (double zi : state.z) out.nsv += std::abs(zi) > zero_tol;
  return out;
}

}  // namespace hmsvm
