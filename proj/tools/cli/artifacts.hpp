#pragma once
// Files written by the commands: the self-describing model JSON and the
// per-iteration convergence trace.
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hmsvm/data.hpp"
#include "hmsvm/ipal.hpp"
#include "run_config.hpp"

namespace hmsvm::cli {

struct ModelFile {
  std::size_t n_features = 0;
  Vector w;  ///< n_features weights followed by the intercept
  std::optional<FeatureScaling> scaling;
  ModelParams params;
  IpalConfig solver;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string termination;
  std::size_t outer_iters = 0;
  double final_vfc = 0.0;
  Metrics train;

  bool operator==(const ModelFile&) const = default;
};

void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path);

inline constexpr const char* kTraceColumns[] = {
    "iter", "vfc",         "dist_p",     "dist_d", "dist_c", "lyapunov_eta",
    "lyapunov_mu", "inner_iters", "step_kinds", "nnz", "nsv", "wall_ms"};

/// "%.17g"
std::string format_double(double v);

/// "N<newton steps>G<gradient steps>"
std::string step_kinds(const OuterTraceEntry& e);

/// One row per outer iteration; wall_ms is cumulative and written as 0 when
/// `timing` is false.
void write_trace(std::ostream& out, const std::vector<OuterTraceEntry>& trace, OutputFormat format,
                 bool timing);
void write_trace(const std::filesystem::path& path, const std::vector<OuterTraceEntry>& trace,
                 OutputFormat format, bool timing);

/// Trace file next to a model: `<out>.trace.csv` or `<out>.trace.json`.
std::filesystem::path default_trace_path(const std::filesystem::path& model_path, OutputFormat format);

}  // namespace hmsvm::cli
