#pragma once
// Parameter record shared by every command, with its JSON form.
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hmsvm/ipal.hpp"
#include "hmsvm/model.hpp"

namespace hmsvm {

// Found by argument-dependent lookup from nlohmann::json.
void to_json(nlohmann::json& j, const ModelParams& p);
void from_json(const nlohmann::json& j, ModelParams& p);
void to_json(nlohmann::json& j, const PgnConfig& c);
void from_json(const nlohmann::json& j, PgnConfig& c);
void to_json(nlohmann::json& j, const IpalConfig& c);
void from_json(const nlohmann::json& j, IpalConfig& c);

}  // namespace hmsvm

namespace hmsvm::cli {

enum class OutputFormat { Csv, Json };

struct SyntheticFlags {
  std::size_t m = 0;
  std::size_t n = 0;
  double noise_ratio = 0.1;
  double mean_gap = 0.6;
  bool operator==(const SyntheticFlags&) const = default;
};

struct CvFlags {
  std::size_t k = 5;
  std::vector<std::size_t> s_grid;  ///< explicit s values
  std::vector<double> s_fractions;  ///< s = ceil(f * n_features) per fraction
  bool operator==(const CvFlags&) const = default;
};

struct SweepFlags {
  std::string param = "rho";  ///< rho | mu | s
  std::vector<double> values; ///< empty selects the preset for `param`
  bool operator==(const SweepFlags&) const = default;
};

struct RunConfig {
  std::uint64_t seed = 0;
  ModelParams model;
  IpalConfig solver;
  SyntheticFlags synthetic;
  std::string data;          ///< LIBSVM input; empty selects the synthetic generator
  bool scale = false;        ///< min/max scaling fitted on the training data
  std::string model_path;    ///< model JSON consumed by predict
  std::string out;
  std::string trace;         ///< train: trace path; empty derives it from `out`
  std::string predictions;   ///< predict: optional per-sample output
  OutputFormat format = OutputFormat::Csv;
  bool timing = true;        ///< false writes zeros in every timing field
  std::size_t jobs = 1;
  CvFlags cv;
  SweepFlags sweep;
  bool operator==(const RunConfig&) const = default;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);
/// Reads a config file; keys absent from the file keep their defaults.
RunConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const RunConfig& cfg);

/// Hex FNV-1a hash of the canonical JSON of the model and solver settings.
std::string config_hash(const RunConfig& cfg);

std::vector<double> sweep_preset(const std::string& param);

}  // namespace hmsvm::cli
