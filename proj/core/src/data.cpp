#include "hmsvm/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string_view>

#include "hmsvm/errors.hpp"
#include "hmsvm/random.hpp"

namespace hmsvm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return false;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size() && std::isfinite(out);
}

struct ParsedRow {
  int label = 0;
  std::vector<std::pair<std::size_t, double>> entries;
};

ParsedRow parse_line(std::string_view line, std::size_t line_no) {
  ParsedRow row;
  std::size_t pos = 0;
  const auto next_token = [&]() -> std::string_view {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    return line.substr(start, pos - start);
  };

  const std::string_view label_tok = next_token();
  double label = 0.0;
  if (!parse_double(label_tok, label)) {
    throw ParseError(line_no, "invalid label '" + std::string(label_tok) + "'");
  }
  if (label == 1.0) {
    row.label = 1;
  } else if (label == 0.0 || label == -1.0) {
    row.label = -1;
  } else {
    throw InputError("line " + std::to_string(line_no) + ": non-binary label '" +
                     std::string(label_tok) + "'");
  }

  std::size_t last_index = 0;
  for (std::string_view tok = next_token(); !tok.empty(); tok = next_token()) {
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(line_no, "expected <index>:<value>, got '" + std::string(tok) + "'");
    }
    std::size_t index = 0;
    const auto idx_tok = tok.substr(0, colon);
    const auto [iptr, iec] = std::from_chars(idx_tok.data(), idx_tok.data() + idx_tok.size(), index);
    if (iec != std::errc() || iptr != idx_tok.data() + idx_tok.size() || index == 0) {
      throw ParseError(line_no, "invalid feature index '" + std::string(idx_tok) + "'");
    }
    if (index <= last_index) throw ParseError(line_no, "feature indices must be ascending");
    double value = 0.0;
    if (!parse_double(tok.substr(colon + 1), value)) {
      throw ParseError(line_no, "invalid feature value '" + std::string(tok.substr(colon + 1)) + "'");
    }
    last_index = index;
    row.entries.emplace_back(index, value);
  }
  return row;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, std::size_t min_features) {
  std::vector<ParsedRow> rows;
  std::size_t n_features = min_features;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    rows.push_back(parse_line(view, line_no));
    if (!rows.back().entries.empty()) {
      n_features = std::max(n_features, rows.back().entries.back().first);
    }
  }

  Dataset d;
  d.features = Matrix(rows.size(), n_features);
  d.labels.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    d.labels.push_back(rows[r].label);
    for (const auto& [index, value] : rows[r].entries) d.features(r, index - 1) = value;
  }
  return d;
}

Dataset read_libsvm(const std::filesystem::path& path, std::size_t min_features) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  Dataset d = parse_libsvm(in, min_features);
  d.source = path.string();
  return d;
}

void write_libsvm(std::ostream& out, const Dataset& d) {
  for (std::size_t r = 0; r < d.size(); ++r) {
    out << (d.labels[r] > 0 ? "+1" : "-1");
    const auto row = d.features.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] != 0.0) out << ' ' << (c + 1) << ':' << format_double(row[c]);
    }
    out << '\n';
  }
}

void write_libsvm(const std::filesystem::path& path, const Dataset& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  write_libsvm(out, d);
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

Dataset apply_scaling(const Dataset& d, const FeatureScaling& scaling) {
  if (scaling.lo.size() != d.n_features() || scaling.hi.size() != d.n_features()) {
    throw InputError("apply_scaling: scaling record does not match feature count");
  }
  Dataset out = d;
  for (std::size_t r = 0; r < out.size(); ++r) {
    auto row = out.features.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double span = scaling.hi[c] - scaling.lo[c];
      row[c] = span > 0.0 ? 2.0 * (row[c] - scaling.lo[c]) / span - 1.0 : 0.0;
    }
  }
  out.scaling = scaling;
  return out;
}

Dataset scale_features(const Dataset& d) {
  FeatureScaling fit;
  const std::size_t n = d.n_features();
  fit.lo.assign(n, 0.0);
  fit.hi.assign(n, 0.0);
  if (d.size() > 0) {
    const auto first = d.features.row(0);
    fit.lo.assign(first.begin(), first.end());
    fit.hi.assign(first.begin(), first.end());
    for (std::size_t r = 1; r < d.size(); ++r) {
      const auto row = d.features.row(r);
      for (std::size_t c = 0; c < n; ++c) {
        fit.lo[c] = std::min(fit.lo[c], row[c]);
        fit.hi[c] = std::max(fit.hi[c], row[c]);
      }
    }
  }
  return apply_scaling(d, fit);
}

SyntheticSpec SyntheticSpec::preset(std::size_t m, std::size_t n, double noise_ratio,
                                    std::uint64_t seed, double mean_gap) {
  SyntheticSpec spec;
  spec.m = m;
  spec.n = n;
  spec.mu1.assign(n, 0.5 * mean_gap);
  spec.mu2.assign(n, -0.5 * mean_gap);
  spec.sigma1.assign(n, 1.0);
  spec.sigma2.assign(n, 1.0);
  spec.noise_ratio = noise_ratio;
  spec.seed = seed;
  return spec;
}

namespace {

void validate(const SyntheticSpec& spec) {
  if (spec.n == 0) throw InputError("generate_synthetic: n must be positive");
  if (spec.mu1.size() != spec.n || spec.mu2.size() != spec.n || spec.sigma1.size() != spec.n ||
      spec.sigma2.size() != spec.n) {
    throw InputError("generate_synthetic: mean/variance vectors must have length n");
  }
  for (std::size_t j = 0; j < spec.n; ++j) {
    if (spec.sigma1[j] < 0.0 || spec.sigma2[j] < 0.0) {
      throw InputError("generate_synthetic: variances must be nonnegative");
    }
  }
  if (!(spec.noise_ratio >= 0.0 && spec.noise_ratio < 1.0)) {
    throw InputError("generate_synthetic: noise ratio must lie in [0, 1)");
  }
}

IndexSet choose_flips(Rng& rng, std::size_t m, double ratio) {
  const auto count = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(m)));
  IndexSet pool(m);
  std::iota(pool.begin(), pool.end(), Index{0});
  // Partial Fisher-Yates: the first `count` slots are a uniform sample.
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(m - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

Dataset generate_synthetic(const SyntheticSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  const std::size_t n_pos = spec.m - spec.m / 2;

  Dataset d;
  d.features = Matrix(spec.m, spec.n);
  d.labels.resize(spec.m);
  for (std::size_t r = 0; r < spec.m; ++r) {
    const bool positive = r < n_pos;
    const Vector& mean = positive ? spec.mu1 : spec.mu2;
    const Vector& var = positive ? spec.sigma1 : spec.sigma2;
    auto row = d.features.row(r);
    for (std::size_t c = 0; c < spec.n; ++c) row[c] = mean[c] + std::sqrt(var[c]) * rng.normal();
    d.labels[r] = positive ? 1 : -1;
  }
  for (Index r : choose_flips(rng, spec.m, spec.noise_ratio)) d.labels[r] = -d.labels[r];
  d.source = "synthetic(seed=" + std::to_string(spec.seed) + ")";
  return d;
}

IndexSet synthetic_flipped_rows(const SyntheticSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  for (std::size_t i = 0; i < spec.m * spec.n; ++i) rng.normal();
  return choose_flips(rng, spec.m, spec.noise_ratio);
}

IndexSet FoldPlan::test_indices(std::size_t fold) const {
  IndexSet out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == fold) out.push_back(i);
  }
  return out;
}

IndexSet FoldPlan::train_indices(std::size_t fold) const {
  IndexSet out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPlan make_folds(std::size_t m, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InputError("make_folds: k must be at least 2");
  if (k > m) throw InputError("make_folds: k exceeds the number of samples");
  IndexSet perm(m);
  std::iota(perm.begin(), perm.end(), Index{0});
  Rng rng(seed);
  for (std::size_t i = m; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(m, 0);
  for (std::size_t pos = 0; pos < m; ++pos) plan.assignment[perm[pos]] = pos % k;
  return plan;
}

Dataset subset(const Dataset& d, std::span<const Index> rows) {
  Dataset out;
  IndexSet all_cols(d.n_features());
  std::iota(all_cols.begin(), all_cols.end(), Index{0});
  out.features = gather_submatrix(d.features, rows, all_cols);
  out.labels.reserve(rows.size());
  for (Index r : rows) out.labels.push_back(d.labels[r]);
  out.scaling = d.scaling;
  out.source = d.source;
  return out;
}

TrainTestSplit split(const Dataset& d, const FoldPlan& plan, std::size_t fold) {
  if (plan.assignment.size() != d.size()) throw InputError("split: fold plan does not match dataset");
  if (fold >= plan.k) throw InputError("split: fold index out of range");
  return {subset(d, plan.train_indices(fold)), subset(d, plan.test_indices(fold))};
}

}  // namespace hmsvm
