#pragma once

// Dense kernels for the small reduced systems formed by the solver.
// Storage is row-major, 64-bit throughout.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hmsvm {

using Index = std::size_t;
using IndexSet = std::vector<Index>;
using Vector = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  /// Takes ownership of row-major `entries`; throws InputError on size mismatch.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// result(r, c) = A(rows[r], cols[c]), order preserved.
Matrix gather_submatrix(const Matrix& a, std::span<const Index> rows, std::span<const Index> cols);

/// y = A x
Vector matvec(const Matrix& a, std::span<const double> x);
/// y = A^T x
Vector matvec_transpose(const Matrix& a, std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double norm2(std::span<const double> x);
double squared_norm(std::span<const double> x);
/// ||x - y||
double distance(std::span<const double> x, std::span<const double> y);

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
/// Construction throws NotPositiveDefinite on a non-positive pivot and
/// InputError when the matrix is not square or visibly asymmetric.
class Cholesky {
 public:
  explicit Cholesky(const Matrix& spd);

  std::size_t size() const noexcept { return n_; }
  Vector solve(std::span<const double> b) const;

 private:
  std::size_t n_ = 0;
  Matrix lower_;
};

/// Solves M x = b for symmetric positive definite M.
Vector cholesky_solve(const Matrix& m, std::span<const double> b);

struct SpectralNormEstimate {
  double estimate = 0.0;     ///< power iteration value, never above ||A||_2
  double upper_bound = 0.0;  ///< sqrt(||A||_1 ||A||_inf), never below ||A||_2
};

/// Power iteration on A^T A from a seeded start vector. The returned estimate is
/// the running maximum of the Rayleigh values, so it is nondecreasing in `iters`.
SpectralNormEstimate spectral_norm_estimate(const Matrix& a, std::size_t iters,
                                            std::uint64_t seed);

}  // namespace hmsvm
