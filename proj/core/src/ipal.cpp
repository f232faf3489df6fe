#include "hmsvm/ipal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "hmsvm/errors.hpp"

namespace hmsvm {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

void validate(const IpalConfig& cfg) {
  if (!(cfg.c1 > 0.0) || !(cfg.c2 > 0.0)) throw InputError("iPAL: c1 and c2 must be positive");
  if (!(cfg.stop_tol > 0.0)) throw InputError("iPAL: stop_tol must be positive");
  if (cfg.max_outer == 0) throw InputError("iPAL: max_outer must be positive");
  if (cfg.gamma_rule == GammaRule::Explicit && !(cfg.gamma > 0.0)) {
    throw InputError("iPAL: explicit gamma must be positive");
  }
  if (cfg.theta_rule == ThetaRule::Explicit) {
    if (cfg.theta_sequence.empty()) throw InputError("iPAL: explicit theta sequence is empty");
    for (double t : cfg.theta_sequence) {
      if (!(t > 0.0)) throw InputError("iPAL: theta values must be positive");
    }
  }
  if (cfg.alpha_vfc < 0.0) throw InputError("iPAL: alpha_vfc must be nonnegative");
}

}  // namespace

DerivedParams derive_params(const ProblemData& p, const IpalConfig& cfg) {
  validate(cfg);
  DerivedParams out;
  if (cfg.gamma_rule == GammaRule::Explicit) {
    out.gamma_hat = cfg.gamma;
  } else {
    double min_row = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.m(); ++i) min_row = std::min(min_row, norm2(p.A().row(i)));
    out.gamma_hat = 0.1 * min_row;
  }
  if (!(out.gamma_hat > 0.0)) throw InputError("iPAL: gamma is zero (A has a zero row)");

  const double mu = p.params().mu;
  out.c3 = (2.0 * cfg.c1 + mu + 2.0) / out.gamma_hat;
  out.c4 = (2.0 * cfg.c1 + mu) / out.gamma_hat;
  out.eta = 4.0 * out.c4 * out.c4 / p.params().rho;
  out.rho_floor = std::max(2.0 / (out.gamma_hat * out.gamma_hat),
                           8.0 * (out.c3 * out.c3 + out.c4 * out.c4) / mu);
  out.certified = p.params().rho >= out.rho_floor;
  return out;
}

Vector multiplier_update(const ProblemData& p, const PrimalDualState& u, double rho) {
  Vector z = constraint_residual(p, {u.w, u.xi});
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = u.z[i] + rho * z[i];
  return z;
}

bool stopping_check(const PrimalDualState& prev, const PrimalDualState& curr, double tol) {
  const double change =
      distance(curr.w, prev.w) + distance(curr.xi, prev.xi) + distance(curr.z, prev.z);
  const double scale = norm2(curr.w) + norm2(curr.xi) + norm2(curr.z);
  if (scale < 1e-15) return change < tol;
  return change / scale < tol;
}

double theta_at(const IpalConfig& cfg, double lambda, std::size_t k) {
  if (k == 0) throw InputError("theta_at: k is 1-based");
  if (cfg.theta_rule == ThetaRule::LambdaOverK) return lambda / static_cast<double>(k);
  const std::size_t idx = std::min(k - 1, cfg.theta_sequence.size() - 1);
  return cfg.theta_sequence[idx];
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::Stationary: return "stationary";
    case Termination::MaxOuter: return "max_outer";
  }
  return "unknown";
}

SolveResult solve(const ProblemData& p, const IpalConfig& cfg, const TraceCallback& on_iter) {
  const auto started = Clock::now();
  SolveResult result;
  SolveReport& report = result.report;
  report.derived = derive_params(p, cfg);
  report.lipschitz = lipschitz_bound(p, p.params().mu);
  report.pgn = resolve_pgn_config(p, cfg.pgn, p.params().mu, report.derived.gamma_hat);
  report.pgn.record_iterates = cfg.pgn.record_iterates;
  report.alpha_vfc = cfg.alpha_vfc > 0.0 ? cfg.alpha_vfc : report.pgn.alpha;

  const double lambda = p.params().lambda;
  const double rho = p.params().rho;
  const double eta = report.derived.eta;

  PrimalDualState state = PrimalDualState::zeros(p);
  report.lyapunov_initial = lyapunov(p, state.primal(), state.z, state.w, eta);

  NewtonSystemCache cache;
  report.termination = Termination::MaxOuter;
  for (std::size_t k = 1; k <= cfg.max_outer; ++k) {
    const auto iter_start = Clock::now();
    const SubproblemContext ctx = SubproblemContext::anchored_at(p, state);

    InexactnessCriteria crit;
    crit.c1 = cfg.c1;
    crit.c2 = cfg.c2;
    crit.theta = theta_at(cfg, lambda, k);
    const SubproblemResult inner =
        solve_subproblem(ctx, p, report.pgn, state.primal(), crit, &cache);

    PrimalDualState next;
    next.w = inner.u.w;
    next.xi = inner.u.xi;
    next.z = state.z;
    const double lyap_mu = eval_G(ctx, p, inner.u);
    next.z = multiplier_update(p, next, rho);

    OuterTraceEntry entry;
    entry.k = k;
    entry.theta = crit.theta;
    entry.lyapunov_mu = lyap_mu;
    entry.lyapunov_eta = lyapunov(p, inner.u, next.z, state.w, eta);
    entry.primal_change = distance(next.w, state.w);
    entry.xi_change = distance(next.xi, state.xi);
    entry.dual_change = distance(next.z, state.z);
    entry.residuals = inner.residuals;
    entry.inner_iters = inner.iterations();
    entry.newton_steps = inner.newton_steps;
    entry.gradient_steps = inner.gradient_steps;
    entry.inner_termination = inner.termination;
    entry.vfc = vfc(p, next, report.alpha_vfc);
    const Metrics met = metrics(p, next, cfg.zero_tol);
    entry.nnz = met.nnz;
    entry.nsv = met.nsv;
    if (cfg.record_iterates) entry.iterate = next;

    const bool stop = stopping_check(state, next, cfg.stop_tol);
    state = std::move(next);
    entry.wall_ms = elapsed_ms(iter_start);
    if (on_iter) on_iter(entry);
    report.trace.push_back(std::move(entry));

    if (inner.termination == PgnTermination::Stationary) {
      report.termination = Termination::Stationary;
      break;
    }
    if (stop) {
      report.termination = Termination::Converged;
      break;
    }
  }

  result.state = std::move(state);
  report.total_ms = elapsed_ms(started);
  return result;
}

}  // namespace hmsvm
