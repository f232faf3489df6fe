#pragma once
// The five verbs. Each takes a fully resolved RunConfig, writes its files and
// returns the process exit code.
#include <iosfwd>

#include "hmsvm/data.hpp"
#include "run_config.hpp"

namespace hmsvm::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kBudgetExhausted = 2 };

/// The dataset selected by `cfg.data`, or the synthetic preset when it is empty.
Dataset load_dataset(const RunConfig& cfg);

int cmd_gen(const RunConfig& cfg, std::ostream& out);
int cmd_train(const RunConfig& cfg, std::ostream& out);
int cmd_predict(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_cv(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);

/// s values for cross-validation: the explicit grid, then ceil(f * n_features)
/// per fraction, deduplicated in order; `cfg.model.s` when both are empty.
std::vector<std::size_t> cv_s_grid(const CvFlags& cv, std::size_t n_features, std::size_t fallback);

}  // namespace hmsvm::cli
