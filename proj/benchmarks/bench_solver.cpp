#include <benchmark/benchmark.h>

#include "hmsvm/data.hpp"
#include "hmsvm/ipal.hpp"
#include "hmsvm/pgn.hpp"
#include "hmsvm/proxops.hpp"
#include "hmsvm/random.hpp"

using namespace hmsvm;

namespace {

Vector normal_vector(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Vector v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

ProblemData synthetic_problem(std::size_t m, std::size_t n, std::size_t s) {
  ModelParams params;
  params.s = s;
  return build_problem(generate_synthetic(SyntheticSpec::preset(m, n, 0.1, 1)), params);
}

void BM_ProxHardMargin(benchmark::State& state) {
  const Vector xi = normal_vector(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(prox_hard_margin(xi, 0.5));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ProxHardMargin)->Arg(1000)->Arg(100000);

void BM_ProjectSparse(benchmark::State& state) {
  const Vector w = normal_vector(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(project_sparse(w, 20));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ProjectSparse)->Arg(1000)->Arg(100000);

void BM_NewtonStep(benchmark::State& state) {
  const std::size_t s = static_cast<std::size_t>(state.range(0));
  const ProblemData p = synthetic_problem(500, 1000, s);
  const PrimalDualState zero = PrimalDualState::zeros(p);
  const SubproblemContext ctx = SubproblemContext::anchored_at(p, zero);
  const PgnConfig cfg = resolve_pgn_config(p, {}, p.params().mu, 0.1);
  const ActiveSets sets = identify(ctx, p, zero.primal(), cfg.alpha, cfg.beta);
  const Primal half = gradient_step(sets);
  for (auto _ : state) benchmark::DoNotOptimize(newton_step(ctx, p, half, sets.T, sets.Gamma));
}
BENCHMARK(BM_NewtonStep)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const ProblemData p = synthetic_problem(200, 400, 20);
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, IpalConfig{}));
}
BENCHMARK(BM_Solve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
