#include "artifacts.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "hmsvm/errors.hpp"

namespace hmsvm::cli {

using nlohmann::json;

namespace {

json metrics_json(const Metrics& m) {
  return json{{"acc", m.acc}, {"sign_acc", m.sign_acc}, {"nnz", m.nnz}, {"nsv", m.nsv}};
}

Metrics metrics_from(const json& j) {
  Metrics m;
  m.acc = j.at("acc").get<double>();
  m.sign_acc = j.at("sign_acc").get<double>();
  m.nnz = j.at("nnz").get<std::size_t>();
  m.nsv = j.at("nsv").get<std::size_t>();
  return m;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

void save_model(const std::filesystem::path& path, const ModelFile& model) {
  json scaling = nullptr;
  if (model.scaling) scaling = json{{"lo", model.scaling->lo}, {"hi", model.scaling->hi}};
  const json j{{"format", "hmsvm-model"},
               {"version", 1},
               {"n_features", model.n_features},
               {"w", model.w},
               {"scaling", scaling},
               {"params", model.params},
               {"solver", model.solver},
               {"fingerprint", {{"config_hash", model.config_hash}, {"seed", model.seed}}},
               {"termination", model.termination},
               {"outer_iters", model.outer_iters},
               {"final_vfc", model.final_vfc},
               {"train", metrics_json(model.train)}};
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model '" + path.string() + "'");
  ModelFile m;
  try {
    const json j = json::parse(in);
    if (j.value("format", "") != "hmsvm-model") throw InputError("'" + path.string() + "' is not a model file");
    m.n_features = j.at("n_features").get<std::size_t>();
    m.w = j.at("w").get<Vector>();
    if (m.w.size() != m.n_features + 1)
      throw InputError("model '" + path.string() + "': w has " + std::to_string(m.w.size()) +
                       " entries, expected " + std::to_string(m.n_features + 1));
    if (!j.at("scaling").is_null())
      m.scaling = FeatureScaling{j.at("scaling").at("lo").get<Vector>(), j.at("scaling").at("hi").get<Vector>()};
    m.params = j.at("params").get<ModelParams>();
    m.solver = j.at("solver").get<IpalConfig>();
    m.config_hash = j.at("fingerprint").at("config_hash").get<std::string>();
    m.seed = j.at("fingerprint").at("seed").get<std::uint64_t>();
    m.termination = j.at("termination").get<std::string>();
    m.outer_iters = j.at("outer_iters").get<std::size_t>();
    m.final_vfc = j.at("final_vfc").get<double>();
    m.train = metrics_from(j.at("train"));
  } catch (const json::exception& e) {
    throw InputError("model '" + path.string() + "': " + e.what());
  }
  return m;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string step_kinds(const OuterTraceEntry& e) {
  return "N" + std::to_string(e.newton_steps) + "G" + std::to_string(e.gradient_steps);
}

void write_trace(std::ostream& out, const std::vector<OuterTraceEntry>& trace, OutputFormat format,
                 bool timing) {
  double wall = 0.0;
  if (format == OutputFormat::Json) {
    json rows = json::array();
    for (const OuterTraceEntry& e : trace) {
      wall += e.wall_ms;
      rows.push_back(json{{"iter", e.k},
                          {"vfc", e.vfc.vfc},
                          {"dist_p", e.vfc.dist_p},
                          {"dist_d", e.vfc.dist_d},
                          {"dist_c", e.vfc.dist_c},
                          {"lyapunov_eta", e.lyapunov_eta},
                          {"lyapunov_mu", e.lyapunov_mu},
                          {"inner_iters", e.inner_iters},
                          {"step_kinds", step_kinds(e)},
                          {"nnz", e.nnz},
                          {"nsv", e.nsv},
                          {"wall_ms", timing ? wall : 0.0}});
    }
    out << rows.dump(1) << '\n';
    return;
  }
  for (std::size_t c = 0; c < std::size(kTraceColumns); ++c) out << (c ? "," : "") << kTraceColumns[c];
  out << '\n';
  for (const OuterTraceEntry& e : trace) {
    wall += e.wall_ms;
    out << e.k << ',' << format_double(e.vfc.vfc) << ',' << format_double(e.vfc.dist_p) << ','
        << format_double(e.vfc.dist_d) << ',' << format_double(e.vfc.dist_c) << ','
        << format_double(e.lyapunov_eta) << ',' << format_double(e.lyapunov_mu) << ','
        << e.inner_iters << ',' << step_kinds(e) << ',' << e.nnz << ',' << e.nsv << ','
        << format_double(timing ? wall : 0.0) << '\n';
  }
}

void write_trace(const std::filesystem::path& path, const std::vector<OuterTraceEntry>& trace,
                 OutputFormat format, bool timing) {
  std::ofstream out = open_out(path);
  write_trace(out, trace, format, timing);
}

std::filesystem::path default_trace_path(const std::filesystem::path& model_path, OutputFormat format) {
  std::filesystem::path p = model_path;
  p += format == OutputFormat::Json ? ".trace.json" : ".trace.csv";
  return p;
}

}  // namespace hmsvm::cli
