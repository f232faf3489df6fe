#include "app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>

#include "commands.hpp"
#include "hmsvm/errors.hpp"

namespace hmsvm::cli {

namespace {

/// The value of --config, if present, so the file can seed the defaults.
std::optional<std::string> find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

/// Options backed by strings that map onto enums after parsing.
struct EnumFlags {
  std::string format;
  std::string step_rule;
};

void add_common(CLI::App* sub, RunConfig& cfg, EnumFlags& enums, std::string& config_path,
                std::string& save_path) {
  sub->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  sub->add_option("--out", cfg.out, "output path");
  sub->add_option("--config", config_path, "JSON config applied before command-line flags");
  sub->add_option("--save-config", save_path, "write the resolved config as JSON");
  sub->add_option("--format", enums.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_synthetic(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--m", cfg.synthetic.m, "synthetic samples");
  sub->add_option("--n", cfg.synthetic.n, "synthetic features");
  sub->add_option("--r", cfg.synthetic.noise_ratio, "label flip ratio in [0, 1)")
      ->capture_default_str();
  sub->add_option("--gap", cfg.synthetic.mean_gap, "distance between class means per feature")
      ->capture_default_str();
}

void add_training(CLI::App* sub, RunConfig& cfg, EnumFlags& enums) {
  add_synthetic(sub, cfg);
  sub->add_option("--data", cfg.data, "LIBSVM training data (default: synthetic)");
  sub->add_flag("--scale,!--no-scale", cfg.scale, "min/max scale features to [-1, 1]");
  sub->add_option("--s", cfg.model.s, "sparsity level")->capture_default_str();
  sub->add_option("--lambda", cfg.model.lambda, "0/1 loss weight")->capture_default_str();
  sub->add_option("--rho", cfg.model.rho, "penalty parameter")->capture_default_str();
  sub->add_option("--mu", cfg.model.mu, "proximal weight")->capture_default_str();
  sub->add_flag("!--exempt-intercept", cfg.model.sparsify_intercept,
                "keep the intercept outside the sparsity budget");
  sub->add_option("--c1", cfg.solver.c1)->capture_default_str();
  sub->add_option("--c2", cfg.solver.c2)->capture_default_str();
  sub->add_option("--gamma", cfg.solver.gamma, "explicit gamma (default: 0.1 min row norm)");
  sub->add_option("--theta", cfg.solver.theta_sequence, "explicit theta sequence");
  sub->add_option("--stop-tol", cfg.solver.stop_tol)->capture_default_str();
  sub->add_option("--max-outer", cfg.solver.max_outer)->capture_default_str();
  sub->add_option("--max-inner", cfg.solver.pgn.max_iters)->capture_default_str();
  sub->add_option("--sigma-g", cfg.solver.pgn.sigma_g, "Newton acceptance constant (0: default)");
  sub->add_option("--step-rule", enums.step_rule, "shared or block")
      ->check(CLI::IsMember({"shared", "block"}));
  sub->add_flag("!--no-truncate-newton", cfg.solver.pgn.truncate_newton,
                "disable the active-set retry after a rejected Newton step");
  sub->add_flag("!--no-timing", cfg.timing, "write zeros in timing fields");
  sub->add_option("--jobs", cfg.jobs, "parallel solves")->check(CLI::PositiveNumber);
}

void apply_enums(const EnumFlags& enums, RunConfig& cfg) {
  if (enums.format == "csv") cfg.format = OutputFormat::Csv;
  if (enums.format == "json") cfg.format = OutputFormat::Json;
  if (enums.step_rule == "shared") cfg.solver.pgn.step_rule = StepRule::SharedLipschitz;
  if (enums.step_rule == "block") cfg.solver.pgn.step_rule = StepRule::BlockLipschitz;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    if (const auto path = find_config(args)) cfg = load_config(*path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  CLI::App app{"Sparse SVM with the 0/1 loss under a cardinality constraint", "hmsvm"};
  app.require_subcommand(1);
  EnumFlags enums;
  std::string config_path;
  std::string save_path;
  bool gamma_given = false;
  bool theta_given = false;

  CLI::App* gen = app.add_subcommand("gen", "write a synthetic two-class LIBSVM file");
  add_common(gen, cfg, enums, config_path, save_path);
  add_synthetic(gen, cfg);

  CLI::App* train = app.add_subcommand("train", "train a model and write its convergence trace");
  add_common(train, cfg, enums, config_path, save_path);
  add_training(train, cfg, enums);
  train->add_option("--trace", cfg.trace, "trace path (default: <out>.trace.<format>)");

  CLI::App* predict = app.add_subcommand("predict", "evaluate a model on a LIBSVM file");
  add_common(predict, cfg, enums, config_path, save_path);
  predict->add_option("--model", cfg.model_path, "model JSON");
  predict->add_option("--data", cfg.data, "LIBSVM data");
  predict->add_option("--predictions", cfg.predictions, "per-sample predictions CSV");

  CLI::App* cv = app.add_subcommand("cv", "k-fold cross-validation over an s grid");
  add_common(cv, cfg, enums, config_path, save_path);
  add_training(cv, cfg, enums);
  cv->add_option("--k", cfg.cv.k, "folds")->capture_default_str();
  cv->add_option("--s-grid", cfg.cv.s_grid, "explicit s values");
  cv->add_option("--s-fractions", cfg.cv.s_fractions, "s = ceil(f * features) per fraction");

  CLI::App* sweep = app.add_subcommand("sweep", "one trace per value of rho, mu or s");
  add_common(sweep, cfg, enums, config_path, save_path);
  add_training(sweep, cfg, enums);
  sweep->add_option("--param", cfg.sweep.param, "rho (sets lambda = rho), mu or s")
      ->check(CLI::IsMember({"rho", "mu", "s"}));
  sweep->add_option("--values", cfg.sweep.values, "explicit values (default: preset)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  for (CLI::App* sub : {train, cv, sweep}) {
    gamma_given = gamma_given || sub->count("--gamma") > 0;
    theta_given = theta_given || sub->count("--theta") > 0;
  }
  if (gamma_given) cfg.solver.gamma_rule = GammaRule::Explicit;
  if (theta_given) cfg.solver.theta_rule = ThetaRule::Explicit;
  apply_enums(enums, cfg);

  try {
    if (!save_path.empty()) save_config(save_path, cfg);
    if (gen->parsed()) return cmd_gen(cfg, out);
    if (train->parsed()) return cmd_train(cfg, out);
    if (predict->parsed()) return cmd_predict(cfg, out, err);
    if (cv->parsed()) return cmd_cv(cfg, out);
    return cmd_sweep(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace hmsvm::cli
