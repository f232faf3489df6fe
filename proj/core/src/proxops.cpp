#include "hmsvm/proxops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hmsvm/errors.hpp"

namespace hmsvm {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw InputError(std::string(what) + " must be positive");
}

}  // namespace

std::size_t zero_one_count(std::span<const double> xi) {
  return static_cast<std::size_t>(std::count_if(xi.begin(), xi.end(), [](double v) { return v > 0.0; }));
}

double positive_hard_threshold(double t, double nu, BoundaryRule rule) {
  require_positive(nu, "positive_hard_threshold: nu");
  if (t < nu) return std::min(0.0, t);
  if (t > nu) return t;
  return rule == BoundaryRule::PreferZero ? 0.0 : t;
}

HardMarginProx prox_hard_margin(std::span<const double> xi, double beta_lambda,
                                BoundaryRule rule) {
  require_positive(beta_lambda, "prox_hard_margin: beta_lambda");
  const double nu = std::sqrt(2.0 * beta_lambda);
  HardMarginProx out;
  out.proxed.resize(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    out.proxed[i] = positive_hard_threshold(xi[i], nu, rule);
    if (out.proxed[i] != 0.0) out.active.push_back(i);
  }
  return out;
}

double moreau_envelope_hard_margin(std::span<const double> v, double beta, double lambda) {
  require_positive(beta, "moreau_envelope_hard_margin: beta");
  require_positive(lambda, "moreau_envelope_hard_margin: lambda");
  double total = 0.0;
  for (double x : v) {
    if (x > 0.0) total += std::min(lambda, x * x / (2.0 * beta));
  }
  return total;
}

IndexSet largest_support(std::span<const double> w, std::size_t s, TieRule) {
  IndexSet idx(w.size());
  std::iota(idx.begin(), idx.end(), Index{0});
  if (s >= w.size()) return idx;
  // Strict total order: larger magnitude first, then lower index.
  const auto before = [&](Index a, Index b) {
    const double ma = std::abs(w[a]);
    const double mb = std::abs(w[b]);
    return ma > mb || (ma == mb && a < b);
  };
  std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(s), idx.end(), before);
  idx.resize(s);
  std::sort(idx.begin(), idx.end());
  return idx;
}

SparseProjection project_sparse(std::span<const double> w, std::size_t s, TieRule rule) {
  if (s < 1) throw InputError("project_sparse: s must be at least 1");
  SparseProjection out;
  out.support = largest_support(w, s, rule);
  out.projected.assign(w.size(), 0.0);
  for (Index i : out.support) out.projected[i] = w[i];
  return out;
}

double kth_largest_magnitude(std::span<const double> w, std::size_t s) {
  if (s == 0 || s > w.size()) return 0.0;
  Vector mags(w.size());
  std::transform(w.begin(), w.end(), mags.begin(), [](double v) { return std::abs(v); });
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(s - 1), mags.end(),
                   std::greater<>());
  return mags[s - 1];
}

bool fixed_point_check_projection(std::span<const double> w, std::span<const double> q,
                                  double alpha, std::size_t s, double tol) {
  if (w.size() != q.size()) throw InputError("fixed_point_check_projection: dimension mismatch");
  require_positive(alpha, "fixed_point_check_projection: alpha");
  const double bound = kth_largest_magnitude(w, s) / alpha;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] != 0.0) {
      if (std::abs(q[i]) > tol) return false;
    } else if (std::abs(q[i]) > bound + tol) {
      return false;
    }
  }
  return true;
}

bool fixed_point_check_prox(std::span<const double> xi, std::span<const double> v, double beta,
                            double lambda, double tol) {
  if (xi.size() != v.size()) throw InputError("fixed_point_check_prox: dimension mismatch");
  require_positive(beta, "fixed_point_check_prox: beta");
  require_positive(lambda, "fixed_point_check_prox: lambda");
  const double nu = std::sqrt(2.0 * beta * lambda);
  const double v_max = std::sqrt(2.0 * lambda / beta);
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double x = xi[i];
    if (x > tol && x < nu - tol) return false;  // forbidden interval (0, nu)
    if (x < -tol || x >= nu - tol) {
      if (std::abs(v[i]) > tol) return false;
    } else if (std::abs(x) <= tol) {
      if (v[i] < -tol || v[i] > v_max + tol) return false;
    }
  }
  return true;
}

}  // namespace hmsvm
