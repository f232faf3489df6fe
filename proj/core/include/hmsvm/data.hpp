#pragma once

// Labeled datasets: LIBSVM text I/O, feature scaling, the Gaussian
// two-class generator and k-fold plans.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hmsvm/linalg.hpp"

namespace hmsvm {

/// Per-feature min/max observed when a scaling was fitted.
struct FeatureScaling {
  Vector lo;
  Vector hi;

  bool operator==(const FeatureScaling&) const = default;
};

struct Dataset {
  Matrix features;          ///< m x n_features
  std::vector<int> labels;  ///< each +1 or -1
  std::optional<FeatureScaling> scaling;
  std::string source;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t n_features() const noexcept { return features.cols(); }
};

/// Parses LIBSVM text: `<label> <idx>:<val> ...`, 1-based ascending indices,
/// `#` starts a comment. Labels {1,+1} -> +1 and {0,-1} -> -1. The feature
/// count is the largest index seen unless `min_features` is larger.
Dataset parse_libsvm(std::istream& in, std::size_t min_features = 0);
Dataset read_libsvm(const std::filesystem::path& path, std::size_t min_features = 0);

/// Writes nonzero entries with round-trip precision.
void write_libsvm(std::ostream& out, const Dataset& d);
void write_libsvm(const std::filesystem::path& path, const Dataset& d);

/// Fits min/max per column on `d`, maps each column affinely onto [-1, 1]
/// (constant columns to 0) and records the fit.
Dataset scale_features(const Dataset& d);

/// Applies an already fitted scaling. Values outside the fitted range map
/// outside [-1, 1].
Dataset apply_scaling(const Dataset& d, const FeatureScaling& scaling);

/// Two Gaussian classes with diagonal covariances plus label noise.
struct SyntheticSpec {
  std::size_t m = 0;
  std::size_t n = 0;
  Vector mu1;      ///< mean of the +1 class
  Vector mu2;      ///< mean of the -1 class
  Vector sigma1;   ///< diagonal variances of the +1 class
  Vector sigma2;   ///< diagonal variances of the -1 class
  double noise_ratio = 0.0;
  std::uint64_t seed = 0;

  /// Means +-gap/2 on every feature, unit variances. Not a published setting.
  static SyntheticSpec preset(std::size_t m, std::size_t n, double noise_ratio,
                              std::uint64_t seed, double mean_gap = 0.6);

  bool operator==(const SyntheticSpec&) const = default;
};

/// First ceil(m/2) rows are drawn from the +1 class, the remaining floor(m/2)
/// from the -1 class; then round(r*m) distinct rows chosen uniformly get their
/// labels flipped.
Dataset generate_synthetic(const SyntheticSpec& spec);

/// Rows whose labels were flipped by generate_synthetic for this spec.
IndexSet synthetic_flipped_rows(const SyntheticSpec& spec);

struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::size_t> assignment;  ///< fold index per sample
  std::uint64_t seed = 0;

  IndexSet test_indices(std::size_t fold) const;
  IndexSet train_indices(std::size_t fold) const;
};

/// Seeded permutation, then round-robin assignment; fold sizes differ by at most 1.
FoldPlan make_folds(std::size_t m, std::size_t k, std::uint64_t seed);

Dataset subset(const Dataset& d, std::span<const Index> rows);

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

TrainTestSplit split(const Dataset& d, const FoldPlan& plan, std::size_t fold);

}  // namespace hmsvm
