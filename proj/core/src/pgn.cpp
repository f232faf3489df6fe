#include "hmsvm/pgn.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

#include "hmsvm/errors.hpp"
#include "hmsvm/proxops.hpp"

namespace hmsvm {

namespace {

constexpr double kStallTolerance = 1e-12;

double squared_distance(const Primal& a, const Primal& b) {
  const double dw = distance(a.w, b.w);
  const double dx = distance(a.xi, b.xi);
  return dw * dw + dx * dx;
}

IndexSet complement(const IndexSet& set, std::size_t n) {
  std::vector<bool> in(n, false);
  for (Index i : set) in[i] = true;
  IndexSet out;
  out.reserve(n - set.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!in[i]) out.push_back(i);
  }
  return out;
}

}  // namespace

double sign_preserving_scale(const Primal& u_half, const Primal& u_tilde, const IndexSet& Gamma) {
  double t = 1.0;
  for (Index i : Gamma) {
    const double from = u_half.xi[i];
    const double to = u_tilde.xi[i];
    if (from < 0.0 && to > 0.0) t = std::min(t, -from / (to - from));
  }
  return t;
}

IndexSet blocking_indices(const Primal& u_half, const Primal& u_tilde, const IndexSet& Gamma,
                          double t) {
  IndexSet out;
  for (Index i : Gamma) {
    const double from = u_half.xi[i];
    const double to = u_tilde.xi[i];
    if (from < 0.0 && to > 0.0 && -from / (to - from) <= t) out.push_back(i);
  }
  return out;
}

IndexSet crossing_indices(const Primal& u_half, const Primal& u_tilde, const IndexSet& Gamma) {
  IndexSet out;
  for (Index i : Gamma) {
    if (u_half.xi[i] <= 0.0 && u_tilde.xi[i] > 0.0) out.push_back(i);
  }
  return out;
}

FaceNewtonResult face_newton_step(const SubproblemContext& ctx, const ProblemData& p,
                                  const Primal& u_half, const Primal& u_tilde, const IndexSet& T,
                                  const IndexSet& Gamma, std::size_t max_rounds,
                                  NewtonSystemCache* cache) {
  FaceNewtonResult out{u_half, 0, 0};
  Primal target = u_tilde;
  IndexSet face = Gamma;
  for (;;) {
    const IndexSet cross = crossing_indices(out.u, target, face);
    if (cross.empty()) {
      out.u = std::move(target);
      return out;
    }
    double t = 1.0;
    for (Index i : cross) t = std::min(t, -out.u.xi[i] / (target.xi[i] - out.u.xi[i]));
    for (std::size_t j = 0; j < out.u.w.size(); ++j) out.u.w[j] += t * (target.w[j] - out.u.w[j]);
    for (std::size_t i = 0; i < out.u.xi.size(); ++i) out.u.xi[i] += t * (target.xi[i] - out.u.xi[i]);
    IndexSet blockers;
    for (Index i : cross) {
      if (out.u.xi[i] >= 0.0) blockers.push_back(i);
    }
    for (Index i : blockers) out.u.xi[i] = 0.0;
    IndexSet kept;
    kept.reserve(face.size() - blockers.size());
    std::set_difference(face.begin(), face.end(), blockers.begin(), blockers.end(), std::back_inserter(kept));
    face = std::move(kept);
    out.pinned += blockers.size();
    if (out.rounds == max_rounds) return out;
    ++out.rounds;
    target = newton_step(ctx, p, out.u, T, face, cache).u_tilde;
  }
}

double lipschitz_bound(double norm_a, double rho, double mu) {
  return (1.0 + mu) + rho * (1.0 + norm_a) * (1.0 + norm_a);
}

double lipschitz_bound(const ProblemData& p, double mu) {
  return lipschitz_bound(spectral_norm_estimate(p.A(), 1, 0).upper_bound, p.params().rho, mu);
}

BlockSteps block_step_limits(const ProblemData& p, double mu) {
  const double norm_a = spectral_norm_estimate(p.A(), 1, 0).upper_bound;
  const double rho = p.params().rho;
  return {1.0 / ((1.0 + mu) + 2.0 * rho * norm_a * norm_a), 1.0 / (2.0 * rho)};
}

double default_sigma_g(const ProblemData& p, double mu, double gamma_hat) {
  const double norm_a = spectral_norm_estimate(p.A(), 1, 0).upper_bound;
  const double candidate =
      std::min(1.0 + mu, p.params().rho * gamma_hat * gamma_hat / (1.0 + norm_a * norm_a));
  return std::clamp(candidate, 1e-8, 1.0 + mu);
}

PgnConfig resolve_pgn_config(const ProblemData& p, const PgnConfig& cfg, double mu,
                             double gamma_hat) {
  if (!(cfg.lipschitz_safety > 0.0 && cfg.lipschitz_safety < 1.0)) {
    throw InputError("PGN: lipschitz_safety must lie in (0, 1)");
  }
  if (cfg.max_iters == 0) throw InputError("PGN: max_iters must be positive");
  PgnConfig out = cfg;
  double alpha_max = 0.0;
  double beta_max = 0.0;
  if (cfg.step_rule == StepRule::SharedLipschitz) {
    alpha_max = beta_max = 1.0 / lipschitz_bound(p, mu);
  } else {
    const BlockSteps limits = block_step_limits(p, mu);
    alpha_max = limits.alpha_max;
    beta_max = limits.beta_max;
  }
  if (out.alpha == 0.0) out.alpha = cfg.lipschitz_safety * alpha_max;
  if (out.beta == 0.0) out.beta = cfg.lipschitz_safety * beta_max;
  if (!(out.alpha > 0.0 && out.alpha < alpha_max) || !(out.beta > 0.0 && out.beta < beta_max)) {
    throw InputError("PGN: step sizes must lie in (0, " + std::to_string(alpha_max) + ") x (0, " +
                     std::to_string(beta_max) + ")");
  }
  if (out.sigma_g == 0.0) out.sigma_g = default_sigma_g(p, mu, gamma_hat);
  if (!(out.sigma_g > 0.0)) throw InputError("PGN: sigma_g must be positive");
  return out;
}

ActiveSets identify(const SubproblemContext& ctx, const ProblemData& p, const Primal& u,
                    double alpha, double beta) {
  return identify(ctx, p, u, grad_g(ctx, p, u), alpha, beta);
}

ActiveSets identify(const SubproblemContext& ctx, const ProblemData& p, const Primal& u,
                    const Gradient& grad, double alpha, double beta) {
  ActiveSets sets;
  sets.w_hat.resize(u.w.size());
  for (std::size_t j = 0; j < u.w.size(); ++j) sets.w_hat[j] = u.w[j] - alpha * grad.w[j];
  sets.xi_hat.resize(u.xi.size());
  for (std::size_t i = 0; i < u.xi.size(); ++i) sets.xi_hat[i] = u.xi[i] - beta * grad.xi[i];

  sets.T = select_support(p, sets.w_hat);
  const double nu = std::sqrt(2.0 * ctx.lambda * beta);
  for (std::size_t i = 0; i < sets.xi_hat.size(); ++i) {
    if (sets.xi_hat[i] < 0.0 || sets.xi_hat[i] > nu) sets.Gamma.push_back(i);
  }
  return sets;
}

Primal gradient_step(const ActiveSets& sets) {
  Primal half{Vector(sets.w_hat.size(), 0.0), Vector(sets.xi_hat.size(), 0.0)};
  for (Index j : sets.T) half.w[j] = sets.w_hat[j];
  for (Index i : sets.Gamma) half.xi[i] = sets.xi_hat[i];
  return half;
}

const Cholesky& NewtonSystemCache::factor(const SubproblemContext& ctx, const ProblemData& p,
                                          const IndexSet& T, const IndexSet& Gamma) {
  if (factor_ && T == T_ && Gamma == Gamma_ && ctx.mu == mu_ && ctx.rho == rho_) return *factor_;

  const IndexSet rows = complement(Gamma, p.m());
  const std::size_t t = T.size();
  Matrix system(t, t);
  const Matrix& a = p.A();
  Vector row_t(t);
  for (Index i : rows) {
    const auto ai = a.row(i);
    for (std::size_t c = 0; c < t; ++c) row_t[c] = ai[T[c]];
    for (std::size_t r = 0; r < t; ++r) {
      const double scaled = ctx.rho * row_t[r];
      if (scaled == 0.0) continue;
      auto sr = system.row(r);
      for (std::size_t c = 0; c <= r; ++c) sr[c] += scaled * row_t[c];
    }
  }
  for (std::size_t r = 0; r < t; ++r) {
    system(r, r) += 1.0 + ctx.mu;
    for (std::size_t c = 0; c < r; ++c) system(c, r) = system(r, c);
  }

  factor_.emplace(system);
  T_ = T;
  Gamma_ = Gamma;
  mu_ = ctx.mu;
  rho_ = ctx.rho;
  ++factorizations_;
  return *factor_;
}

NewtonResult newton_step(const SubproblemContext& ctx, const ProblemData& p, const Primal& u_half,
                         const IndexSet& T, const IndexSet& Gamma, NewtonSystemCache* cache) {
  if (T.empty()) throw InputError("newton_step: T must be nonempty");
  const Gradient grad = grad_g(ctx, p, u_half);
  const Matrix& a = p.A();

  Vector b_w(T.size());
  for (std::size_t c = 0; c < T.size(); ++c) b_w[c] = -grad.w[T[c]];
  Vector b_xi(Gamma.size());
  for (std::size_t r = 0; r < Gamma.size(); ++r) b_xi[r] = -grad.xi[Gamma[r]];

  // rhs = b_w + A_{Gamma,T}^T b_xi
  Vector rhs = b_w;
  for (std::size_t r = 0; r < Gamma.size(); ++r) {
    const auto ai = a.row(Gamma[r]);
    for (std::size_t c = 0; c < T.size(); ++c) rhs[c] += ai[T[c]] * b_xi[r];
  }

  NewtonSystemCache local;
  NewtonSystemCache& sys = cache != nullptr ? *cache : local;
  NewtonResult out;
  out.d_w = sys.factor(ctx, p, T, Gamma).solve(rhs);

  // d_xi = b_xi / rho + A_{Gamma,T} d_w
  out.d_xi.resize(Gamma.size());
  for (std::size_t r = 0; r < Gamma.size(); ++r) {
    const auto ai = a.row(Gamma[r]);
    double v = b_xi[r] / ctx.rho;
    for (std::size_t c = 0; c < T.size(); ++c) v += ai[T[c]] * out.d_w[c];
    out.d_xi[r] = v;
  }

  Primal step{Vector(p.d(), 0.0), Vector(p.m(), 0.0)};
  for (std::size_t c = 0; c < T.size(); ++c) step.w[T[c]] = out.d_w[c];
  for (std::size_t r = 0; r < Gamma.size(); ++r) step.xi[Gamma[r]] = out.d_xi[r];

  // Residual of the reduced system, evaluated through the full Hessian.
  const Primal hd = hessian_apply(ctx, p, step);
  double res = 0.0;
  for (std::size_t c = 0; c < T.size(); ++c) {
    const double v = hd.w[T[c]] - b_w[c];
    res += v * v;
  }
  for (std::size_t r = 0; r < Gamma.size(); ++r) {
    const double v = hd.xi[Gamma[r]] - b_xi[r];
    res += v * v;
  }
  out.residual = std::sqrt(res);

  out.u_tilde = u_half;
  axpy(1.0, step.w, out.u_tilde.w);
  axpy(1.0, step.xi, out.u_tilde.xi);
  return out;
}

bool accept_newton(double G_half, double G_tilde, double dist_sq, double sigma_g) {
  return G_half - G_tilde >= 0.25 * sigma_g * dist_sq;
}

const char* to_string(PgnTermination t) {
  switch (t) {
    case PgnTermination::CriteriaMet: return "criteria_met";
    case PgnTermination::Stationary: return "stationary";
    case PgnTermination::MaxIters: return "max_iters";
  }
  return "unknown";
}

bool criteria_met(const ProblemData& p, const SubproblemContext& ctx, const Primal& u,
                  double G_value, const ResidualReport& res, const InexactnessCriteria& crit,
                  double reference_G) {
  const double move = distance(u.w, ctx.anchor_w);
  return G_value <= reference_G && constrained_nnz(p, u.w) <= p.params().s &&
         res.r1 <= crit.c1 * move && res.r2 <= crit.c2 * move * move && res.r3 <= crit.theta;
}

SubproblemResult solve_subproblem(const SubproblemContext& ctx, const ProblemData& p,
                                  const PgnConfig& cfg, const Primal& u0,
                                  const InexactnessCriteria& crit, NewtonSystemCache* cache) {
  if (!(cfg.alpha > 0.0) || !(cfg.beta > 0.0) || !(cfg.sigma_g > 0.0)) {
    throw InputError("solve_subproblem: configuration is not resolved");
  }
  if (constrained_nnz(p, u0.w) > p.params().s) {
    throw InfeasibleSparsity("solve_subproblem: initial w is not s-sparse");
  }

  NewtonSystemCache local;
  NewtonSystemCache& sys = cache != nullptr ? *cache : local;

  SubproblemResult out;
  out.u = u0;
  out.G_value = eval_G(ctx, p, out.u);
  const double reference = crit.reference_G.value_or(out.G_value);
  out.residuals = residuals(ctx, p, out.u, cfg.alpha, cfg.beta);
  if (criteria_met(p, ctx, out.u, out.G_value, out.residuals, crit, reference)) {
    out.termination = PgnTermination::CriteriaMet;
    return out;
  }

  for (std::size_t j = 0; j < cfg.max_iters; ++j) {
    const Gradient grad = grad_g(ctx, p, out.u);
    const ActiveSets sets = identify(ctx, p, out.u, grad, cfg.alpha, cfg.beta);
    const Primal u_half = gradient_step(sets);
    const double G_half = eval_G(ctx, p, u_half);

    PgnTraceEntry entry;
    entry.iter = j;
    entry.G_before = out.G_value;
    entry.G_half = G_half;
    entry.T_size = sets.T.size();
    entry.Gamma_size = sets.Gamma.size();
    entry.half_dist_sq = squared_distance(u_half, out.u);

    NewtonResult newton = newton_step(ctx, p, u_half, sets.T, sets.Gamma, &sys);
    entry.newton_residual = newton.residual;
    const double G_tilde = eval_G(ctx, p, newton.u_tilde);
    const double newton_sq = squared_distance(newton.u_tilde, u_half);

    Primal next;
    bool accepted = accept_newton(G_half, G_tilde, newton_sq, cfg.sigma_g);
    double G_next = G_tilde;
    double next_sq = newton_sq;
    entry.newton_scale = 1.0;
    if (accepted) {
      next = std::move(newton.u_tilde);
    } else if (cfg.truncate_newton) {
      FaceNewtonResult face =
          face_newton_step(ctx, p, u_half, newton.u_tilde, sets.T, sets.Gamma, sets.Gamma.size(), &sys);
      G_next = eval_G(ctx, p, face.u);
      next_sq = squared_distance(face.u, u_half);
      if (accept_newton(G_half, G_next, next_sq, cfg.sigma_g)) {
        accepted = true;
        entry.face_pinned = face.pinned;
        next = std::move(face.u);
      }
      const double t = accepted ? 1.0 : sign_preserving_scale(u_half, newton.u_tilde, sets.Gamma);
      if (t > 0.0 && t < 1.0) {
        Primal trial = u_half;
        for (Index j2 : sets.T) trial.w[j2] += t * (newton.u_tilde.w[j2] - u_half.w[j2]);
        for (Index i : sets.Gamma) trial.xi[i] += t * (newton.u_tilde.xi[i] - u_half.xi[i]);
        for (Index i : blocking_indices(u_half, newton.u_tilde, sets.Gamma, t)) trial.xi[i] = 0.0;
        G_next = eval_G(ctx, p, trial);
        next_sq = squared_distance(trial, u_half);
        if (accept_newton(G_half, G_next, next_sq, cfg.sigma_g)) {
          accepted = true;
          entry.newton_scale = t;
          next = std::move(trial);
        }
      }
    }
    if (accepted) {
      entry.step_kind = StepKind::Newton;
      entry.G_value = G_next;
      entry.newton_dist_sq = next_sq;
      ++out.newton_steps;
    } else {
      next = u_half;
      entry.step_kind = StepKind::Gradient;
      entry.G_value = G_half;
      ++out.gradient_steps;
    }

    const double moved = std::sqrt(squared_distance(next, out.u));
    out.u = std::move(next);
    out.G_value = entry.G_value;
    out.residuals = residuals(ctx, p, out.u, cfg.alpha, cfg.beta);
    entry.residuals = out.residuals;
    if (cfg.record_iterates) entry.iterate = out.u;
    out.trace.push_back(std::move(entry));

    if (criteria_met(p, ctx, out.u, out.G_value, out.residuals, crit, reference)) {
      out.termination = PgnTermination::CriteriaMet;
      return out;
    }
    if (moved <= kStallTolerance) {
      out.termination = PgnTermination::Stationary;
      return out;
    }
  }
  out.termination = PgnTermination::MaxIters;
  return out;
}

}  // namespace hmsvm
