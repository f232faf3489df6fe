#pragma once
// Reference implementations used only by the tests. They are written from the
// definitions, without calling the library routine they check.
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "hmsvm/linalg.hpp"
#include "hmsvm/model.hpp"
#include "hmsvm/random.hpp"

namespace oracle {

using hmsvm::Index;
using hmsvm::IndexSet;
using hmsvm::Matrix;
using hmsvm::Vector;

inline constexpr double kGridLo = -10.0;
inline constexpr double kGridHi = 10.0;
inline constexpr double kGridStep = 1e-4;

inline double grid_point(long k) { return kGridLo + static_cast<double>(k) * kGridStep; }
inline long grid_count() { return std::lround((kGridHi - kGridLo) / kGridStep); }

struct GridMin {
  double argmin = 0.0;
  double value = std::numeric_limits<double>::infinity();
};

/// min over the grid of  lambda h(q) + (q - v)^2 / (2 beta),  h(q) = [q > 0].
/// The first grid point attaining the minimum wins.
inline GridMin grid_hard_margin(double v, double beta, double lambda) {
  GridMin best;
  const long n = grid_count();
  for (long k = 0; k <= n; ++k) {
    const double q = grid_point(k);
    const double f = (q > 0.0 ? lambda : 0.0) + (q - v) * (q - v) / (2.0 * beta);
    if (f < best.value) best = {q, f};
  }
  return best;
}

/// Minimizer of ||w - x|| over every support of size s, by enumeration.
inline Vector exhaustive_projection(const Vector& w, std::size_t s) {
  const std::size_t n = w.size();
  if (s >= n) return w;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(s), true);
  double best = std::numeric_limits<double>::infinity();
  Vector best_x;
  do {
    Vector x(n, 0.0);
    double dropped = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pick[i]) {
        x[i] = w[i];
      } else {
        dropped += w[i] * w[i];
      }
    }
    if (dropped < best) {
      best = dropped;
      best_x = std::move(x);
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best_x;
}

inline Eigen::MatrixXd to_eigen(const Matrix& a) {
  Eigen::MatrixXd out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
  return out;
}

inline Eigen::VectorXd to_eigen(const Vector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
}

inline Vector from_eigen(const Eigen::VectorXd& v) { return Vector(v.data(), v.data() + v.size()); }

/// g_k written out term by term.
inline double g_explicit(const Eigen::MatrixXd& A, const Eigen::VectorXd& w,
                         const Eigen::VectorXd& xi, const Eigen::VectorXd& anchor_w,
                         const Eigen::VectorXd& anchor_z, double rho, double mu) {
  const Eigen::VectorXd r = A * w + Eigen::VectorXd::Ones(A.rows()) - xi;
  return 0.5 * w.squaredNorm() + anchor_z.dot(r) + 0.5 * rho * r.squaredNorm() +
         0.5 * mu * (w - anchor_w).squaredNorm();
}

/// Full Hessian of g_k over (w, xi).
inline Eigen::MatrixXd hessian_explicit(const Eigen::MatrixXd& A, double rho, double mu) {
  const long m = A.rows();
  const long d = A.cols();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d + m, d + m);
  H.topLeftCorner(d, d) =
      (1.0 + mu) * Eigen::MatrixXd::Identity(d, d) + rho * A.transpose() * A;
  H.topRightCorner(d, m) = -rho * A.transpose();
  H.bottomLeftCorner(m, d) = -rho * A;
  H.bottomRightCorner(m, m) = rho * Eigen::MatrixXd::Identity(m, m);
  return H;
}

/// Direct solve of the reduced Newton system over (w_T, xi_Gamma) with the
/// full Hessian; returns the step in T-then-Gamma order.
inline Eigen::VectorXd dense_newton(const hmsvm::SubproblemContext& ctx, const hmsvm::ProblemData& p,
                                    const hmsvm::Primal& u, const IndexSet& T,
                                    const IndexSet& Gamma) {
  const Eigen::MatrixXd A = to_eigen(p.A());
  const Eigen::MatrixXd H = hessian_explicit(A, ctx.rho, ctx.mu);
  const Eigen::VectorXd w = to_eigen(u.w);
  const Eigen::VectorXd xi = to_eigen(u.xi);
  const Eigen::VectorXd zt =
      to_eigen(ctx.anchor_z) + ctx.rho * (A * w + Eigen::VectorXd::Ones(p.m()) - xi);
  const Eigen::VectorXd gw = w + ctx.mu * (w - to_eigen(ctx.anchor_w)) + A.transpose() * zt;
  const Eigen::VectorXd gxi = -zt;

  std::vector<long> idx;
  for (Index j : T) idx.push_back(static_cast<long>(j));
  for (Index i : Gamma) idx.push_back(static_cast<long>(p.d() + i));
  const long k = static_cast<long>(idx.size());
  const long d = static_cast<long>(p.d());
  Eigen::MatrixXd Hs(k, k);
  Eigen::VectorXd rhs(k);
  for (long r = 0; r < k; ++r) {
    for (long c = 0; c < k; ++c) Hs(r, c) = H(idx[r], idx[c]);
    rhs[r] = idx[r] < d ? -gw[idx[r]] : -gxi[idx[r] - d];
  }
  return Hs.fullPivLu().solve(rhs);
}

inline Vector random_vector(hmsvm::Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Vector v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

inline Vector random_normal(hmsvm::Rng& rng, std::size_t n, double scale = 1.0) {
  Vector v(n);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

inline Matrix random_matrix(hmsvm::Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix a(rows, cols);
  for (double& x : a.data()) x = rng.normal();
  return a;
}

inline std::vector<int> random_labels(hmsvm::Rng& rng, std::size_t m) {
  std::vector<int> y(m);
  for (std::size_t i = 0; i < m; ++i) y[i] = (i % 2 == 0) ? 1 : -1;
  for (std::size_t i = m; i > 1; --i) std::swap(y[i - 1], y[rng.below(i)]);
  return y;
}

/// Random subset of {0, ..., n-1} of the given size, ascending.
inline IndexSet random_subset(hmsvm::Rng& rng, std::size_t n, std::size_t size) {
  IndexSet all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  for (std::size_t i = 0; i < size; ++i) std::swap(all[i], all[i + rng.below(n - i)]);
  all.resize(size);
  std::sort(all.begin(), all.end());
  return all;
}

/// Anchors that make (w, xi) a stationary point of g_k for step sizes
/// (alpha, beta): the w-gradient vanishes, z_trial is zero where xi != 0 and
/// half way into (0, nu / beta) where xi == 0. xi must avoid (0, nu).
inline hmsvm::SubproblemContext stationary_context(const hmsvm::ProblemData& p, const Vector& w,
                                                   const Vector& xi, double beta) {
  const auto& prm = p.params();
  const double nu = std::sqrt(2.0 * beta * prm.lambda);
  Vector z_trial(p.m(), 0.0);
  for (std::size_t i = 0; i < p.m(); ++i)
    if (xi[i] == 0.0) z_trial[i] = 0.5 * nu / beta;
  const Vector aw = hmsvm::matvec(p.A(), w);
  hmsvm::SubproblemContext ctx;
  ctx.rho = prm.rho;
  ctx.mu = prm.mu;
  ctx.lambda = prm.lambda;
  ctx.anchor_z.resize(p.m());
  for (std::size_t i = 0; i < p.m(); ++i)
    ctx.anchor_z[i] = z_trial[i] - prm.rho * (aw[i] + 1.0 - xi[i]);
  const Vector atz = hmsvm::matvec_transpose(p.A(), z_trial);
  ctx.anchor_w.resize(p.d());
  for (std::size_t j = 0; j < p.d(); ++j) ctx.anchor_w[j] = w[j] + (w[j] + atz[j]) / prm.mu;
  return ctx;
}

inline double relative_error(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  const double scale = std::max(1.0, want.norm());
  return (got - want).norm() / scale;
}

}  // namespace oracle
