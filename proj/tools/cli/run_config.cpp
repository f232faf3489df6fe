#include "run_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "hmsvm/errors.hpp"

namespace hmsvm {

using nlohmann::json;

namespace {

template <class E>
struct EnumNames;

template <>
struct EnumNames<GammaRule> {
  static constexpr std::pair<GammaRule, const char*> table[] = {
      {GammaRule::HeuristicMinRowNorm, "min_row_norm"}, {GammaRule::Explicit, "explicit"}};
};
template <>
struct EnumNames<ThetaRule> {
  static constexpr std::pair<ThetaRule, const char*> table[] = {
      {ThetaRule::LambdaOverK, "lambda_over_k"}, {ThetaRule::Explicit, "explicit"}};
};
template <>
struct EnumNames<StepRule> {
  static constexpr std::pair<StepRule, const char*> table[] = {
      {StepRule::SharedLipschitz, "shared"}, {StepRule::BlockLipschitz, "block"}};
};

template <class E>
std::string enum_name(E value) {
  for (const auto& [v, name] : EnumNames<E>::table)
    if (v == value) return name;
  return "unknown";
}

template <class E>
E enum_value(const json& j, const char* key, E fallback) {
  if (!j.contains(key)) return fallback;
  const std::string s = j.at(key).get<std::string>();
  for (const auto& [v, name] : EnumNames<E>::table)
    if (s == name) return v;
  throw InputError(std::string("config: unknown value '") + s + "' for " + key);
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void to_json(json& j, const PgnConfig& c) {
  j = json{{"step_rule", enum_name(c.step_rule)},
           {"alpha", c.alpha},
           {"beta", c.beta},
           {"sigma_g", c.sigma_g},
           {"max_iters", c.max_iters},
           {"lipschitz_safety", c.lipschitz_safety},
           {"truncate_newton", c.truncate_newton}};
}

void from_json(const json& j, PgnConfig& c) {
  c.step_rule = enum_value(j, "step_rule", c.step_rule);
  read(j, "alpha", c.alpha);
  read(j, "beta", c.beta);
  read(j, "sigma_g", c.sigma_g);
  read(j, "max_iters", c.max_iters);
  read(j, "lipschitz_safety", c.lipschitz_safety);
  read(j, "truncate_newton", c.truncate_newton);
}

void to_json(json& j, const ModelParams& p) {
  j = json{{"lambda", p.lambda},
           {"rho", p.rho},
           {"mu", p.mu},
           {"s", p.s},
           {"sparsify_intercept", p.sparsify_intercept}};
}

void from_json(const json& j, ModelParams& p) {
  read(j, "lambda", p.lambda);
  read(j, "rho", p.rho);
  read(j, "mu", p.mu);
  read(j, "s", p.s);
  read(j, "sparsify_intercept", p.sparsify_intercept);
}

void to_json(json& j, const IpalConfig& c) {
  json pgn;
  to_json(pgn, c.pgn);
  j = json{{"c1", c.c1},
           {"c2", c.c2},
           {"gamma_rule", enum_name(c.gamma_rule)},
           {"gamma", c.gamma},
           {"theta_rule", enum_name(c.theta_rule)},
           {"theta_sequence", c.theta_sequence},
           {"stop_tol", c.stop_tol},
           {"max_outer", c.max_outer},
           {"alpha_vfc", c.alpha_vfc},
           {"zero_tol", c.zero_tol},
           {"pgn", pgn}};
}

void from_json(const json& j, IpalConfig& c) {
  read(j, "c1", c.c1);
  read(j, "c2", c.c2);
  c.gamma_rule = enum_value(j, "gamma_rule", c.gamma_rule);
  read(j, "gamma", c.gamma);
  c.theta_rule = enum_value(j, "theta_rule", c.theta_rule);
  read(j, "theta_sequence", c.theta_sequence);
  read(j, "stop_tol", c.stop_tol);
  read(j, "max_outer", c.max_outer);
  read(j, "alpha_vfc", c.alpha_vfc);
  read(j, "zero_tol", c.zero_tol);
  if (j.contains("pgn")) from_json(j.at("pgn"), c.pgn);
}

}  // namespace hmsvm

namespace hmsvm::cli {

namespace {

std::string format_name(OutputFormat f) { return f == OutputFormat::Json ? "json" : "csv"; }

OutputFormat format_value(const json& j, OutputFormat fallback) {
  if (!j.contains("format")) return fallback;
  const std::string s = j.at("format").get<std::string>();
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw InputError("config: unknown format '" + s + "'");
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void to_json(json& j, const RunConfig& c) {
  j = json{{"seed", c.seed},
           {"model", c.model},
           {"solver", c.solver},
           {"synthetic",
            {{"m", c.synthetic.m},
             {"n", c.synthetic.n},
             {"noise_ratio", c.synthetic.noise_ratio},
             {"mean_gap", c.synthetic.mean_gap}}},
           {"data", c.data},
           {"scale", c.scale},
           {"model_path", c.model_path},
           {"out", c.out},
           {"trace", c.trace},
           {"predictions", c.predictions},
           {"format", format_name(c.format)},
           {"timing", c.timing},
           {"jobs", c.jobs},
           {"cv", {{"k", c.cv.k}, {"s_grid", c.cv.s_grid}, {"s_fractions", c.cv.s_fractions}}},
           {"sweep", {{"param", c.sweep.param}, {"values", c.sweep.values}}}};
}

void from_json(const json& j, RunConfig& c) {
  read(j, "seed", c.seed);
  if (j.contains("model")) from_json(j.at("model"), c.model);
  if (j.contains("solver")) from_json(j.at("solver"), c.solver);
  if (j.contains("synthetic")) {
    const json& s = j.at("synthetic");
    read(s, "m", c.synthetic.m);
    read(s, "n", c.synthetic.n);
    read(s, "noise_ratio", c.synthetic.noise_ratio);
    read(s, "mean_gap", c.synthetic.mean_gap);
  }
  read(j, "data", c.data);
  read(j, "scale", c.scale);
  read(j, "model_path", c.model_path);
  read(j, "out", c.out);
  read(j, "trace", c.trace);
  read(j, "predictions", c.predictions);
  c.format = format_value(j, c.format);
  read(j, "timing", c.timing);
  read(j, "jobs", c.jobs);
  if (j.contains("cv")) {
    const json& v = j.at("cv");
    read(v, "k", c.cv.k);
    read(v, "s_grid", c.cv.s_grid);
    read(v, "s_fractions", c.cv.s_fractions);
  }
  if (j.contains("sweep")) {
    const json& v = j.at("sweep");
    read(v, "param", c.sweep.param);
    read(v, "values", c.sweep.values);
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path.string() + "'");
  RunConfig cfg;
  try {
    from_json(json::parse(in), cfg);
  } catch (const json::exception& e) {
    throw InputError("config '" + path.string() + "': " + e.what());
  }
  return cfg;
}

void save_config(const std::filesystem::path& path, const RunConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write config '" + path.string() + "'");
  out << json(cfg).dump(2) << '\n';
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = json{{"model", cfg.model}, {"solver", cfg.solver}, {"seed", cfg.seed}}.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> sweep_preset(const std::string& param) {
  std::vector<double> out;
  if (param == "rho") {
    for (int e = -3; e <= 3; ++e) out.push_back(std::pow(10.0, e));
  } else if (param == "mu") {
    for (int e = 0; e <= 10; ++e) out.push_back(0.01 * std::ldexp(1.0, e));
  } else if (param == "s") {
    for (int s = 20; s <= 200; s += 20) out.push_back(s);
  } else {
    throw InputError("sweep: unknown parameter '" + param + "' (expected rho, mu or s)");
  }
  return out;
}

}  // namespace hmsvm::cli
