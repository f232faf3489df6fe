#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include "artifacts.hpp"
#include "hmsvm/errors.hpp"
#include "hmsvm/ipal.hpp"

namespace hmsvm::cli {

namespace {

/// Runs tasks 0..count-1 on up to `jobs` threads; results land by index.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

void require_out(const RunConfig& cfg, const char* verb) {
  if (cfg.out.empty()) throw InputError(std::string(verb) + ": --out is required");
}

SyntheticSpec synthetic_spec(const RunConfig& cfg) {
  if (cfg.synthetic.m == 0 || cfg.synthetic.n == 0)
    throw InputError("synthetic data needs --m and --n (or pass --data)");
  return SyntheticSpec::preset(cfg.synthetic.m, cfg.synthetic.n, cfg.synthetic.noise_ratio, cfg.seed,
                               cfg.synthetic.mean_gap);
}

struct Trained {
  SolveResult result;
  Dataset train;  ///< scaled when requested
};

Trained train_on(const Dataset& raw, const ModelParams& params, const RunConfig& cfg) {
  Trained t{{}, cfg.scale ? scale_features(raw) : raw};
  const ProblemData p = build_problem(t.train, params);
  t.result = solve(p, cfg.solver);
  return t;
}

}  // namespace

Dataset load_dataset(const RunConfig& cfg) {
  if (!cfg.data.empty()) return read_libsvm(cfg.data);
  return generate_synthetic(synthetic_spec(cfg));
}

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
  require_out(cfg, "gen");
  const Dataset d = generate_synthetic(synthetic_spec(cfg));
  write_libsvm(std::filesystem::path(cfg.out), d);
  out << "wrote " << d.size() << " samples x " << d.n_features() << " features to " << cfg.out << '\n';
  return kOk;
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
  require_out(cfg, "train");
  const Dataset raw = load_dataset(cfg);
  const Trained t = train_on(raw, cfg.model, cfg);
  const ProblemData p = build_problem(t.train, cfg.model);
  const SolveReport& rep = t.result.report;

  ModelFile model;
  model.n_features = raw.n_features();
  model.w = t.result.state.w;
  model.scaling = t.train.scaling;
  model.params = cfg.model;
  model.solver = cfg.solver;
  model.config_hash = config_hash(cfg);
  model.seed = cfg.seed;
  model.termination = to_string(rep.termination);
  model.outer_iters = rep.trace.size();
  model.final_vfc = rep.trace.empty() ? 0.0 : rep.trace.back().vfc.vfc;
  model.train = metrics(p, t.result.state, cfg.solver.zero_tol);
  save_model(cfg.out, model);

  const std::filesystem::path trace =
      cfg.trace.empty() ? default_trace_path(cfg.out, cfg.format) : std::filesystem::path(cfg.trace);
  write_trace(trace, rep.trace, cfg.format, cfg.timing);

  out << "termination=" << model.termination << " iters=" << model.outer_iters
      << " vfc=" << format_double(model.final_vfc) << " acc=" << format_double(model.train.acc)
      << " nnz=" << model.train.nnz << " nsv=" << model.train.nsv
      << " time_ms=" << format_double(cfg.timing ? rep.total_ms : 0.0) << '\n';
  return rep.termination == Termination::MaxOuter ? kBudgetExhausted : kOk;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.model_path.empty()) throw InputError("predict: --model is required");
  if (cfg.data.empty()) throw InputError("predict: --data is required");
  const ModelFile model = load_model(cfg.model_path);
  Dataset data = read_libsvm(cfg.data, model.n_features);
  if (data.n_features() != model.n_features)
    throw InputError("predict: data has " + std::to_string(data.n_features()) +
                     " features, model expects " + std::to_string(model.n_features));
  if (model.scaling)
    data = apply_scaling(data, *model.scaling);
  else
    err << "warning: model has no scaling record; using raw features\n";

  const ProblemData p = build_problem(data, model.params);
  PrimalDualState st = PrimalDualState::zeros(p);
  st.w = model.w;
  Metrics met = metrics(p, st, model.solver.zero_tol);
  met.nsv = model.train.nsv;

  if (!cfg.predictions.empty()) {
    std::ofstream pred = open_out(cfg.predictions);
    pred << "index,label,score,predicted\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
      double score = model.w.back();
      for (std::size_t c = 0; c < model.n_features; ++c) score += data.features(i, c) * model.w[c];
      pred << i << ',' << data.labels[i] << ',' << format_double(score) << ',' << (score >= 0.0 ? 1 : -1)
           << '\n';
    }
  }

  std::ostringstream report;
  if (cfg.format == OutputFormat::Json) {
    report << nlohmann::json{{"samples", data.size()},
                             {"acc", met.acc},
                             {"sign_acc", met.sign_acc},
                             {"nnz", met.nnz},
                             {"nsv", met.nsv}}
                  .dump(2)
           << '\n';
  } else {
    report << "samples,acc,sign_acc,nnz,nsv\n"
           << data.size() << ',' << format_double(met.acc) << ',' << format_double(met.sign_acc) << ','
           << met.nnz << ',' << met.nsv << '\n';
  }
  if (cfg.out.empty())
    out << report.str();
  else
    open_out(cfg.out) << report.str();
  return kOk;
}

std::vector<std::size_t> cv_s_grid(const CvFlags& cv, std::size_t n_features, std::size_t fallback) {
  std::vector<std::size_t> grid;
  auto add = [&](std::size_t s) {
    if (std::find(grid.begin(), grid.end(), s) == grid.end()) grid.push_back(s);
  };
  for (std::size_t s : cv.s_grid) add(s);
  for (double f : cv.s_fractions) {
    if (!(f > 0.0)) throw InputError("cv: s fractions must be positive");
    add(static_cast<std::size_t>(std::ceil(f * static_cast<double>(n_features))));
  }
  if (grid.empty()) grid.push_back(fallback);
  return grid;
}

int cmd_cv(const RunConfig& cfg, std::ostream& out) {
  if (cfg.cv.k < 2) throw InputError("cv: k must be at least 2");
  const Dataset raw = load_dataset(cfg);
  const FoldPlan plan = make_folds(raw.size(), cfg.cv.k, cfg.seed);
  const std::vector<std::size_t> grid = cv_s_grid(cfg.cv, raw.n_features(), cfg.model.s);

  struct FoldResult {
    double acc = 0.0;
    double sign_acc = 0.0;
    double ms = 0.0;
    std::size_t nsv = 0;
    std::size_t nnz = 0;
    bool exhausted = false;
  };
  const std::size_t k = cfg.cv.k;
  std::vector<FoldResult> results(grid.size() * k);
  parallel_for(results.size(), cfg.jobs, [&](std::size_t task) {
    ModelParams params = cfg.model;
    params.s = grid[task / k];
    TrainTestSplit tt = split(raw, plan, task % k);
    const Trained t = train_on(tt.train, params, cfg);
    if (t.train.scaling) tt.test = apply_scaling(tt.test, *t.train.scaling);
    const ProblemData train_p = build_problem(t.train, params);
    const Metrics train_m = metrics(train_p, t.result.state, cfg.solver.zero_tol);
    const ProblemData test_p = build_problem(tt.test, params);
    PrimalDualState st = PrimalDualState::zeros(test_p);
    st.w = t.result.state.w;
    const Metrics test_m = metrics(test_p, st, cfg.solver.zero_tol);
    results[task] = {test_m.acc,
                     test_m.sign_acc,
                     cfg.timing ? t.result.report.total_ms : 0.0,
                     train_m.nsv,
                     train_m.nnz,
                     t.result.report.termination == Termination::MaxOuter};
  });

  std::ostringstream table;
  table << "s,acc,acc_std,sign_acc,time_ms,nsv,nnz,exhausted_folds\n";
  bool any_exhausted = false;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double acc = 0.0, acc_sq = 0.0, sign_acc = 0.0, ms = 0.0, nsv = 0.0, nnz = 0.0;
    std::size_t exhausted = 0;
    for (std::size_t f = 0; f < k; ++f) {
      const FoldResult& r = results[g * k + f];
      acc += r.acc;
      acc_sq += r.acc * r.acc;
      sign_acc += r.sign_acc;
      ms += r.ms;
      nsv += static_cast<double>(r.nsv);
      nnz += static_cast<double>(r.nnz);
      exhausted += r.exhausted;
    }
    const double kd = static_cast<double>(k);
    const double mean = acc / kd;
    const double var = std::max(0.0, acc_sq / kd - mean * mean);
    table << grid[g] << ',' << format_double(mean) << ',' << format_double(std::sqrt(var)) << ','
          << format_double(sign_acc / kd) << ',' << format_double(ms / kd) << ',' << format_double(nsv / kd)
          << ',' << format_double(nnz / kd) << ',' << exhausted << '\n';
    any_exhausted = any_exhausted || exhausted > 0;
  }
  if (cfg.out.empty())
    out << table.str();
  else
    open_out(cfg.out) << table.str();
  return any_exhausted ? kBudgetExhausted : kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  require_out(cfg, "sweep");
  const std::vector<double> values =
      cfg.sweep.values.empty() ? sweep_preset(cfg.sweep.param) : cfg.sweep.values;
  // Validates the parameter name even when explicit values are given.
  sweep_preset(cfg.sweep.param);
  const Dataset raw = load_dataset(cfg);
  const std::filesystem::path dir(cfg.out);
  std::filesystem::create_directories(dir);

  std::vector<SolveReport> reports(values.size());
  parallel_for(values.size(), cfg.jobs, [&](std::size_t i) {
    ModelParams params = cfg.model;
    const double v = values[i];
    if (cfg.sweep.param == "rho") {
      params.rho = v;
      params.lambda = v;
    } else if (cfg.sweep.param == "mu") {
      params.mu = v;
    } else {
      if (!(v >= 1.0) || v != std::floor(v)) throw InputError("sweep: s values must be positive integers");
      params.s = static_cast<std::size_t>(v);
    }
    reports[i] = train_on(raw, params, cfg).result.report;
  });

  const char* ext = cfg.format == OutputFormat::Json ? ".json" : ".csv";
  std::ofstream summary = open_out(dir / "summary.csv");
  summary << "setting,param,value,iters,final_vfc,total_ms,termination,trace\n";
  bool any_exhausted = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const SolveReport& rep = reports[i];
    const std::string name = "trace_" + std::to_string(i) + ext;
    write_trace(dir / name, rep.trace, cfg.format, cfg.timing);
    summary << i << ',' << cfg.sweep.param << ',' << format_double(values[i]) << ',' << rep.trace.size()
            << ',' << format_double(rep.trace.empty() ? 0.0 : rep.trace.back().vfc.vfc) << ','
            << format_double(cfg.timing ? rep.total_ms : 0.0) << ',' << to_string(rep.termination) << ','
            << name << '\n';
    any_exhausted = any_exhausted || rep.termination == Termination::MaxOuter;
  }
  out << "wrote " << values.size() << " traces and summary.csv to " << dir.string() << '\n';
  return any_exhausted ? kBudgetExhausted : kOk;
}

}  // namespace hmsvm::cli
