#include <doctest.h>

#include <cmath>

#include "hmsvm/data.hpp"
#include "hmsvm/errors.hpp"
#include "hmsvm/ipal.hpp"
#include "hmsvm/random.hpp"
#include "oracles.hpp"

using namespace hmsvm;

TEST_CASE("derived parameters") {
  const Matrix x(2, 1, {1.0, -1.0});
  const std::vector<int> y{1, -1};
  ModelParams params;
  params.s = 1;
  params.mu = 0.01;
  params.rho = 1.0;
  const ProblemData p(x, y, params);

  IpalConfig cfg;
  cfg.c1 = 0.1;
  cfg.gamma_rule = GammaRule::Explicit;
  cfg.gamma = 1.0;
  const DerivedParams d = derive_params(p, cfg);
  CHECK(d.c3 == doctest::Approx(2.21));
  CHECK(d.c4 == doctest::Approx(0.21));
  CHECK(d.eta == doctest::Approx(0.1764));
  CHECK(d.rho_floor == doctest::Approx(8.0 * (2.21 * 2.21 + 0.21 * 0.21) / 0.01));
  CHECK_FALSE(d.certified);

  cfg.gamma = 2.0;
  const DerivedParams h = derive_params(p, cfg);
  CHECK(h.c3 == doctest::Approx(d.c3 / 2.0));
  CHECK(h.c4 == doctest::Approx(d.c4 / 2.0));

  // Heuristic gamma: a tenth of the smallest row norm of A (rows are -y [x, 1]).
  cfg.gamma_rule = GammaRule::HeuristicMinRowNorm;
  CHECK(derive_params(p, cfg).gamma_hat == doctest::Approx(0.1 * std::sqrt(2.0)));

  cfg.gamma_rule = GammaRule::Explicit;
  cfg.gamma = 0.0;
  CHECK_THROWS_AS(derive_params(p, cfg), InputError);
}

TEST_CASE("rho at the floor is certified") {
  const Matrix x(2, 1, {1.0, -1.0});
  const std::vector<int> y{1, -1};
  ModelParams params;
  params.s = 1;
  IpalConfig cfg;
  const double floor = derive_params(ProblemData(x, y, params), cfg).rho_floor;
  params.rho = floor;
  CHECK(derive_params(ProblemData(x, y, params), cfg).certified);
}

TEST_CASE("multiplier update") {
  Rng rng(1);
  ModelParams params;
  params.s = 3;
  const ProblemData p(oracle::random_matrix(rng, 6, 4), oracle::random_labels(rng, 6), params);
  PrimalDualState st = PrimalDualState::zeros(p);
  st.w = {0.5, 0.0, -1.0, 0.0, 0.2};
  st.xi = matvec(p.A(), st.w);
  for (double& v : st.xi) v += 1.0;
  st.z = oracle::random_normal(rng, p.m());
  CHECK(distance(multiplier_update(p, st, 3.0), st.z) <= 1e-12);

  st.xi = oracle::random_normal(rng, p.m());
  st.z.assign(p.m(), 0.0);
  const Vector r = constraint_residual(p, st.primal());
  const Vector z2 = multiplier_update(p, st, 2.0);
  for (std::size_t i = 0; i < p.m(); ++i) CHECK(z2[i] == doctest::Approx(2.0 * r[i]));

  st.z = oracle::random_normal(rng, p.m());
  const SubproblemContext ctx{st.w, st.z, 1.7, 0.01, 1.0};
  CHECK(distance(multiplier_update(p, st, 1.7), grad_g(ctx, p, st.primal()).z_trial) <= 1e-12);
}

TEST_CASE("stopping rule") {
  PrimalDualState a{{1.0, 2.0}, {0.5}, {0.1}};
  CHECK(stopping_check(a, a, 1e-3));
  PrimalDualState b = a;
  b.w[0] += 0.01;
  CHECK_FALSE(stopping_check(a, b, 1e-3));
  CHECK(stopping_check(a, b, 1e-2));

  const PrimalDualState zero{{0.0, 0.0}, {0.0}, {0.0}};
  PrimalDualState tiny = zero;
  tiny.w[0] = 1e-16;
  CHECK(stopping_check(tiny, zero, 1e-3));
  tiny.w[0] = 1e-2;
  CHECK_FALSE(stopping_check(tiny, zero, 1e-3));
  CHECK(IpalConfig{}.stop_tol == 1e-3);
}

TEST_CASE("theta sequence") {
  IpalConfig cfg;
  CHECK(theta_at(cfg, 2.0, 1) == 2.0);
  CHECK(theta_at(cfg, 2.0, 4) == 0.5);
  CHECK_THROWS_AS(theta_at(cfg, 2.0, 0), InputError);
  cfg.theta_rule = ThetaRule::Explicit;
  cfg.theta_sequence = {0.3, 0.2};
  CHECK(theta_at(cfg, 2.0, 1) == 0.3);
  CHECK(theta_at(cfg, 2.0, 2) == 0.2);
  CHECK(theta_at(cfg, 2.0, 9) == 0.2);
}

TEST_CASE("configuration is validated") {
  const Matrix x(2, 1, {1.0, -1.0});
  const std::vector<int> y{1, -1};
  ModelParams params;
  params.s = 1;
  const ProblemData p(x, y, params);
  IpalConfig cfg;
  cfg.c1 = 0.0;
  CHECK_THROWS_AS(solve(p, cfg), InputError);
  cfg = {};
  cfg.theta_rule = ThetaRule::Explicit;
  CHECK_THROWS_AS(solve(p, cfg), InputError);
  cfg = {};
  cfg.max_outer = 0;
  CHECK_THROWS_AS(solve(p, cfg), InputError);
}

TEST_CASE("two separable points") {
  const Matrix x(2, 1, {1.0, -1.0});
  const std::vector<int> y{1, -1};
  ModelParams params;
  params.s = 2;
  const ProblemData p(x, y, params);
  IpalConfig cfg;
  cfg.stop_tol = 1e-9;
  cfg.max_outer = 50;
  const SolveResult res = solve(p, cfg);
  CHECK(res.report.termination != Termination::MaxOuter);
  CHECK(res.report.trace.size() <= 50);
  CHECK(res.report.trace.back().vfc.vfc <= 1e-6);
  const Metrics met = metrics(p, res.state);
  CHECK(met.acc == 1.0);
  CHECK(met.sign_acc == 1.0);
}

TEST_CASE("synthetic instance keeps the sparsity level and reaches feasibility") {
  const Dataset data = generate_synthetic(SyntheticSpec::preset(200, 400, 0.1, 7));
  ModelParams params;
  const ProblemData p = build_problem(data, params);
  IpalConfig cfg;
  cfg.stop_tol = 1e-7;
  std::size_t calls = 0;
  const SolveResult res = solve(p, cfg, [&](const OuterTraceEntry&) { ++calls; });
  CHECK(calls == res.report.trace.size());
  for (const OuterTraceEntry& e : res.report.trace) {
    CHECK(e.nnz <= params.s);
    CHECK(constrained_nnz(p, res.state.w) <= params.s);
  }
  CHECK(res.report.termination != Termination::MaxOuter);
  CHECK(norm2(constraint_residual(p, res.state.primal())) <= 1e-5);
  CHECK(metrics(p, res.state).acc >= 0.8);

  const SolveResult again = solve(p, cfg);
  CHECK(again.state == res.state);
}

TEST_CASE("recorded iterates match the trace") {
  const Dataset data = generate_synthetic(SyntheticSpec::preset(40, 30, 0.1, 2));
  ModelParams params;
  params.s = 5;
  const ProblemData p = build_problem(data, params);
  IpalConfig cfg;
  cfg.record_iterates = true;
  const SolveResult res = solve(p, cfg);
  REQUIRE_FALSE(res.report.trace.empty());
  PrimalDualState prev = PrimalDualState::zeros(p);
  for (const OuterTraceEntry& e : res.report.trace) {
    REQUIRE(e.iterate.has_value());
    const PrimalDualState& cur = *e.iterate;
    CHECK(e.primal_change == doctest::Approx(distance(cur.w, prev.w)));
    CHECK(e.vfc.vfc == doctest::Approx(vfc(p, cur, res.report.alpha_vfc).vfc));
    CHECK(distance(cur.z, multiplier_update(p, {cur.w, cur.xi, prev.z}, params.rho)) <= 1e-12);
    prev = cur;
  }
  CHECK(res.state == prev);
}
