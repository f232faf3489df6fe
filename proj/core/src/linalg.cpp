#include "hmsvm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hmsvm/errors.hpp"
#include "hmsvm/random.hpp"

namespace hmsvm {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw InputError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                     " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require_same_size(data_.size(), rows * cols, "Matrix");
  for (double v : data_) {
    if (!std::isfinite(v)) throw InputError("Matrix: non-finite entry");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix gather_submatrix(const Matrix& a, std::span<const Index> rows,
                        std::span<const Index> cols) {
  for (Index r : rows) {
    if (r >= a.rows()) throw InputError("gather_submatrix: row index out of range");
  }
  for (Index c : cols) {
    if (c >= a.cols()) throw InputError("gather_submatrix: column index out of range");
  }
  Matrix out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto src = a.row(rows[r]);
    auto dst = out.row(r);
    for (std::size_t c = 0; c < cols.size(); ++c) dst[c] = src[cols[c]];
  }
  return out;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  require_same_size(a.cols(), x.size(), "matvec");
  Vector y(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) y[r] = dot(a.row(r), x);
  return y;
}

Vector matvec_transpose(const Matrix& a, std::span<const double> x) {
  require_same_size(a.rows(), x.size(), "matvec_transpose");
  Vector y(a.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    if (x[r] != 0.0) axpy(x[r], a.row(r), y);
  }
  return y;
}

double dot(std::span<const double> x, std::span<const double> y) {
  require_same_size(x.size(), y.size(), "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require_same_size(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double squared_norm(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

double norm2(std::span<const double> x) { return std::sqrt(squared_norm(x)); }

double distance(std::span<const double> x, std::span<const double> y) {
  require_same_size(x.size(), y.size(), "distance");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

Cholesky::Cholesky(const Matrix& spd) : n_(spd.rows()), lower_(spd.rows(), spd.rows()) {
  if (spd.rows() != spd.cols()) throw InputError("Cholesky: matrix is not square");
  double scale = 0.0;
  for (double v : spd.data()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(spd(i, j) - spd(j, i)) > 1e-12 * std::max(scale, 1.0)) {
        throw InputError("Cholesky: matrix is not symmetric");
      }
    }
  }

  for (std::size_t j = 0; j < n_; ++j) {
    double diag = spd(j, j);
    const auto lj = lower_.row(j);
    for (std::size_t k = 0; k < j; ++k) diag -= lj[k] * lj[k];
    if (!(diag > 0.0)) {
      throw NotPositiveDefinite("Cholesky: non-positive pivot at column " + std::to_string(j));
    }
    const double pivot = std::sqrt(diag);
    lower_(j, j) = pivot;
    for (std::size_t i = j + 1; i < n_; ++i) {
      const auto li = lower_.row(i);
      double v = spd(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= li[k] * lj[k];
      lower_(i, j) = v / pivot;
    }
  }
}

Vector Cholesky::solve(std::span<const double> b) const {
  require_same_size(n_, b.size(), "Cholesky::solve");
  Vector x(b.begin(), b.end());
  // L y = b
  for (std::size_t i = 0; i < n_; ++i) {
    const auto li = lower_.row(i);
    double v = x[i];
    for (std::size_t k = 0; k < i; ++k) v -= li[k] * x[k];
    x[i] = v / li[i];
  }
  // L^T x = y
  for (std::size_t ii = n_; ii-- > 0;) {
    double v = x[ii];
    for (std::size_t k = ii + 1; k < n_; ++k) v -= lower_(k, ii) * x[k];
    x[ii] = v / lower_(ii, ii);
  }
  return x;
}

Vector cholesky_solve(const Matrix& m, std::span<const double> b) {
  require_same_size(m.rows(), b.size(), "cholesky_solve");
  return Cholesky(m).solve(b);
}

SpectralNormEstimate spectral_norm_estimate(const Matrix& a, std::size_t iters,
                                            std::uint64_t seed) {
  SpectralNormEstimate out;
  if (a.empty()) return out;

  double max_col = 0.0;
  Vector col_sums(a.cols(), 0.0);
  double max_row = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double row_sum = 0.0;
    const auto row = a.row(r);
    for (std::size_t c = 0; c < a.cols(); ++c) {
      row_sum += std::abs(row[c]);
      col_sums[c] += std::abs(row[c]);
    }
    max_row = std::max(max_row, row_sum);
  }
  for (double s : col_sums) max_col = std::max(max_col, s);
  out.upper_bound = std::sqrt(max_col * max_row);
  if (out.upper_bound == 0.0) return out;

  Rng rng(seed);
  Vector v(a.cols());
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  double nv = norm2(v);
  if (nv == 0.0) {
    v.assign(a.cols(), 1.0);
    nv = norm2(v);
  }
  for (double& x : v) x /= nv;

  for (std::size_t it = 0; it < std::max<std::size_t>(iters, 1); ++it) {
    const Vector av = matvec(a, v);
    const double rayleigh = norm2(av);  // ||A v|| with ||v|| = 1
    out.estimate = std::max(out.estimate, rayleigh);
    Vector next = matvec_transpose(a, av);
    const double nn = norm2(next);
    if (nn == 0.0) break;
    for (double& x : next) x /= nn;
    v = std::move(next);
  }
  out.estimate = std::min(out.estimate, out.upper_bound);
  return out;
}

}  // namespace hmsvm
