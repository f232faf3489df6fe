#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "hmsvm/errors.hpp"
#include "hmsvm/linalg.hpp"
#include "hmsvm/random.hpp"
#include "oracles.hpp"

using namespace hmsvm;

TEST_CASE("gather_submatrix picks rows and columns in order") {
  const Matrix eye = Matrix::identity(3);
  const IndexSet rows{0, 2};
  const IndexSet cols{0, 2};
  CHECK(gather_submatrix(eye, rows, cols) == Matrix::identity(2));

  const Matrix a(2, 2, {1, 2, 3, 4});
  const IndexSet r1{1};
  const IndexSet c01{0, 1};
  CHECK(gather_submatrix(a, r1, c01) == Matrix(1, 2, {3, 4}));

  Rng rng(11);
  const Matrix b = oracle::random_matrix(rng, 5, 4);
  const IndexSet rs{0, 3};
  const IndexSet cs{1, 2};
  const Matrix sub = gather_submatrix(b, rs, cs);
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j) CHECK(sub(i, j) == b(rs[i], cs[j]));

  const IndexSet bad{5};
  CHECK_THROWS_AS(gather_submatrix(b, bad, cs), InputError);
}

TEST_CASE("matrix construction validates entries") {
  CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), InputError);
  CHECK_THROWS_AS(Matrix(1, 1, std::vector<double>{std::nan("")}), InputError);
}

TEST_CASE("basic vector kernels") {
  const Vector x{1, 2};
  const Vector y{3, 4};
  CHECK(dot(x, y) == 11.0);
  CHECK(matvec(Matrix::identity(2), x) == x);
  CHECK(squared_norm(y) == 25.0);
  CHECK(norm2(y) == 5.0);
  CHECK(distance(x, y) == doctest::Approx(std::sqrt(8.0)));
  Vector z = y;
  axpy(2.0, x, z);
  CHECK(z == Vector{5, 8});
  CHECK_THROWS_AS(dot(x, Vector{1}), InputError);
}

TEST_CASE("matvec agrees with an elementwise sum") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = oracle::random_matrix(rng, 7, 5);
    const Vector x = oracle::random_normal(rng, 5);
    const Vector u = oracle::random_normal(rng, 7);
    const Vector ax = matvec(a, x);
    const Vector atu = matvec_transpose(a, u);
    for (std::size_t r = 0; r < 7; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < 5; ++c) s += a(r, c) * x[c];
      CHECK(std::abs(ax[r] - s) <= 1e-12);
    }
    for (std::size_t c = 0; c < 5; ++c) {
      double s = 0.0;
      for (std::size_t r = 0; r < 7; ++r) s += a(r, c) * u[r];
      CHECK(std::abs(atu[c] - s) <= 1e-12);
    }
  }
}

TEST_CASE("cholesky_solve") {
  CHECK(cholesky_solve(Matrix::identity(2), Vector{3, -1}) == Vector{3, -1});
  const Vector diag = cholesky_solve(Matrix(2, 2, {4, 0, 0, 9}), Vector{8, 27});
  CHECK(diag[0] == doctest::Approx(2.0));
  CHECK(diag[1] == doctest::Approx(3.0));

  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix g = oracle::random_matrix(rng, 6, 6);
    Matrix m(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        double s = i == j ? 1.0 : 0.0;
        for (std::size_t k = 0; k < 6; ++k) s += g(k, i) * g(k, j);
        m(i, j) = s;
      }
    const Vector b = oracle::random_normal(rng, 6);
    const Vector x = cholesky_solve(m, b);
    const Vector mx = matvec(m, x);
    CHECK(distance(mx, b) <= 1e-10);
    const Eigen::VectorXd want = oracle::to_eigen(m).llt().solve(oracle::to_eigen(b));
    CHECK(oracle::relative_error(oracle::to_eigen(x), want) <= 1e-12);
  }
}

TEST_CASE("cholesky rejects bad input") {
  CHECK_THROWS_AS(Cholesky(Matrix(2, 3)), InputError);
  CHECK_THROWS_AS(Cholesky(Matrix(2, 2, {1, 2, 0, 1})), InputError);
  CHECK_THROWS_AS(Cholesky(Matrix(2, 2, {1, 2, 2, 1})), NotPositiveDefinite);
  CHECK_THROWS_AS(Cholesky(Matrix(1, 1, {0.0})), NotPositiveDefinite);
  const Cholesky c(Matrix::identity(2));
  CHECK_THROWS_AS(c.solve(Vector{1}), InputError);
}

TEST_CASE("spectral norm estimate") {
  Matrix two = Matrix::identity(3);
  for (double& x : two.data()) x *= 2.0;
  const auto e2 = spectral_norm_estimate(two, 20, 1);
  CHECK(std::abs(e2.estimate - 2.0) <= 1e-9);
  CHECK(e2.upper_bound >= 2.0 - 1e-12);

  const auto e3 = spectral_norm_estimate(Matrix(2, 2, {3, 0, 0, 1}), 50, 1);
  CHECK(std::abs(e3.estimate - 3.0) <= 1e-6);

  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = oracle::random_matrix(rng, 8, 5);
    const Eigen::MatrixXd ea = oracle::to_eigen(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ea.transpose() * ea);
    const double truth = std::sqrt(eig.eigenvalues().maxCoeff());
    const auto est = spectral_norm_estimate(a, 500, 42);
    CHECK(std::abs(est.estimate - truth) <= 1e-6);
    CHECK(est.estimate <= truth + 1e-12);
    CHECK(est.upper_bound >= truth);
  }

  const auto zero = spectral_norm_estimate(Matrix(3, 2), 10, 1);
  CHECK(zero.estimate == 0.0);
  CHECK(zero.upper_bound == 0.0);
}

TEST_CASE("rng stream is fixed by the seed") {
  Rng a(123);
  Rng b(123);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next_u64() == b.next_u64());
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(a.normal() == b.normal());
    const auto k = a.below(7);
    CHECK(k == b.below(7));
    CHECK(k < 7);
  }
  CHECK_THROWS(a.below(0));
}

TEST_CASE("rng normal moments") {
  Rng rng(2024);
  const int n = 200000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  // Five standard errors.
  CHECK(std::abs(mean) <= 5.0 / std::sqrt(n));
  CHECK(std::abs(var - 1.0) <= 5.0 * std::sqrt(2.0 / n));
}
