#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "platelab/errors.hpp"
#include "platelab/linalg.hpp"

using namespace platelab;
using namespace platelab::linalg;

namespace {

Matrix conditioned_matrix(int n, std::mt19937_64& rng) {
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = i + 1.0;
  const Eigen::MatrixXd a = oracle::random_orthogonal(n, rng) * d.asDiagonal() * oracle::random_orthogonal(n, rng);
  return oracle::from_eigen(a);
}

// Greedy matching distance between two eigenvalue multisets.
double match_distance(CVector a, CVector b) {
  double worst = 0.0;
  for (const Complex& z : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](const Complex& p, const Complex& q) { return std::abs(p - z) < std::abs(q - z); });
    worst = std::max(worst, std::abs(*it - z));
    b.erase(it);
  }
  return worst;
}

}  // namespace

TEST(Dense, RejectsNonFiniteEntries) {
  EXPECT_THROW(Matrix(1, 2, std::vector<double>{1.0, std::nan("")}), Error);
  EXPECT_THROW(Matrix(1, 1, std::vector<double>{INFINITY}), Error);
}

TEST(Lu, IdentitySolve) {
  const Matrix b = Matrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
  EXPECT_EQ(lu_solve(Matrix::identity(3), b), b);
}

TEST(Lu, Diagonal) {
  const LuFactorization<double> lu(Matrix::from_rows({{2, 0}, {0, 4}}));
  const Vector x = lu.solve(Vector{2, 4});
  EXPECT_DOUBLE_EQ(x[0], 1.0);
  EXPECT_DOUBLE_EQ(x[1], 1.0);
}

TEST(Lu, RandomWellConditioned) {
  std::mt19937_64 rng(1);
  const Matrix a = conditioned_matrix(50, rng);
  std::normal_distribution<double> normal;
  Matrix b(50, 3);
  for (double& v : b.data()) v = normal(rng);
  const Matrix x = lu_solve(a, b);
  const Matrix r = add(multiply(a, x), b, -1.0);
  EXPECT_LE(norm_inf(r), 1e-12 * norm_inf(a) * norm_inf(x));
}

TEST(Lu, ComplexAndAdjointSolves) {
  const CMatrix a = CMatrix::from_rows({{Complex(2, 1), Complex(0, 1)}, {Complex(1, 0), Complex(3, -1)}});
  const LuFactorization<Complex> lu(a);
  const CVector b{Complex(1, 0), Complex(0, 2)};
  const CVector x = lu.solve(b);
  const CVector ax = multiply(a, x);
  const CVector y = lu.solve_adjoint(b);
  const CVector ahy = multiply(adjoint(a), y);
  for (int i = 0; i < 2; ++i) {
    EXPECT_LT(std::abs(ax[i] - b[i]), 1e-14);
    EXPECT_LT(std::abs(ahy[i] - b[i]), 1e-14);
  }
}

TEST(Lu, SingularMatrixDetected) {
  EXPECT_THROW(LuFactorization<double>(Matrix::from_rows({{1, 2}, {2, 4}})), SingularMatrix);
  EXPECT_THROW(LuFactorization<double>(Matrix(3, 3)), SingularMatrix);
}

TEST(Cholesky, SolvesAndRejectsIndefinite) {
  const Matrix a = Matrix::from_rows({{4, 1}, {1, 3}});
  const Cholesky c(a);
  const Vector x = c.solve(Vector{1, 2});
  const Vector ax = multiply(a, x);
  EXPECT_NEAR(ax[0], 1.0, 1e-15);
  EXPECT_NEAR(ax[1], 2.0, 1e-15);
  EXPECT_THROW(Cholesky(Matrix::from_rows({{1, 2}, {2, 1}})), NotPositiveDefinite);
}

TEST(Eig, Diagonal) {
  const EigenResult r = eig_general(Matrix::from_rows({{1, 0, 0}, {0, 2, 0}, {0, 0, 3}}));
  EXPECT_LT(match_distance(r.eigenvalues, {1, 2, 3}), 1e-14);
  EXPECT_LE(r.residual_bound, 1e-14);
}

TEST(Eig, RotationGenerator) {
  const EigenResult r = eig_general(Matrix::from_rows({{0, 1}, {-1, 0}}));
  EXPECT_LT(match_distance(r.eigenvalues, {Complex(0, 1), Complex(0, -1)}), 1e-14);
}

TEST(Eig, CompanionOfCubeRoots) {
  // z^3 - 1: roots exp(2 pi i k / 3).
  const EigenResult r = eig_general(Matrix::from_rows({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}));
  CVector roots;
  for (int k = 0; k < 3; ++k) roots.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0));
  EXPECT_LT(match_distance(r.eigenvalues, roots), 1e-10);
}

TEST(Eig, AgreesWithEigenOnRandomMatrices) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int n : {5, 20, 60}) {
    Matrix a(n, n);
    for (double& v : a.data()) v = normal(rng);
    const EigenResult r = eig_general(a);
    Eigen::EigenSolver<Eigen::MatrixXd> es(oracle::to_eigen(a), false);
    CVector reference(es.eigenvalues().data(), es.eigenvalues().data() + n);
    EXPECT_LT(match_distance(r.eigenvalues, reference), 1e-9 * norm_inf(a));
    EXPECT_LE(r.residual_bound, 1e-8 * norm_inf(a));
    // Complex eigenvalues come in conjugate pairs.
    EXPECT_LT(match_distance(r.eigenvalues, [&] {
                CVector c;
                for (const Complex& z : r.eigenvalues) c.push_back(std::conj(z));
                return c;
              }()),
              1e-12 * norm_inf(a));
  }
}

TEST(Eig, PermutationInvariant) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  const int n = 12;
  Matrix a(n, n);
  for (double& v : a.data()) v = normal(rng);
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = (i * 5 + 3) % n;
  Matrix b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = a(p[i], p[j]);
  EXPECT_LT(match_distance(eig_general(a).eigenvalues, eig_general(b).eigenvalues), 1e-11 * norm_inf(a));
}

TEST(Eig, EigenvectorsSatisfyDefinition) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> normal;
  Matrix a(30, 30);
  for (double& v : a.data()) v = normal(rng);
  const EigenResult r = eig_general(a);
  ASSERT_TRUE(r.vectors.has_value());
  for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) {
    CVector v(30);
    for (int i = 0; i < 30; ++i) v[i] = (*r.vectors)(i, k);
    CVector av = multiply(a, v);
    for (int i = 0; i < 30; ++i) av[i] -= r.eigenvalues[k] * v[i];
    EXPECT_NEAR(norm2(v), 1.0, 1e-12);
    EXPECT_LE(norm2(av), 1e-10 * norm_inf(a));
  }
}

TEST(Gsv, Trivial) {
  const Matrix g = Matrix::identity(3);
  EXPECT_NEAR(smallest_gsv(to_complex(add(Matrix::identity(3), Matrix::identity(3))), g), 2.0, 1e-10);
  EXPECT_NEAR(smallest_gsv(to_complex(Matrix::from_rows({{1, 0}, {0, 10}})), Matrix::identity(2)), 1.0, 1e-10);
}

TEST(Gsv, ShiftedRotation) {
  // C = 2i I - J for J = [[0,1],[-1,0]]: singular values |2 -+ 1|.
  const CMatrix c = CMatrix::from_rows({{Complex(0, 2), Complex(-1, 0)}, {Complex(1, 0), Complex(0, 2)}});
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(oracle::to_eigen(c));
  EXPECT_NEAR(svd.singularValues().minCoeff(), 1.0, 1e-14);
  EXPECT_NEAR(smallest_gsv(c, Matrix::identity(2)), 1.0, 1e-9);
}

TEST(Gsv, MatchesWeightedSvdOracle) {
  // min ||Cx||_G / ||x||_G equals the smallest singular value of R C R^{-1}, G = R^T R.
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  const int n = 10;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = normal(rng);
    const Eigen::MatrixXd g = b * b.transpose() + n * Eigen::MatrixXd::Identity(n, n);
    CMatrix c(n, n);
    for (Complex& z : c.data()) z = Complex(normal(rng), normal(rng));
    const Eigen::MatrixXd r = g.llt().matrixU();
    const Eigen::MatrixXcd weighted = r.cast<Complex>() * oracle::to_eigen(c) * r.inverse().cast<Complex>();
    const double expected = Eigen::JacobiSVD<Eigen::MatrixXcd>(weighted).singularValues().minCoeff();
    const double sigma = smallest_gsv(c, oracle::from_eigen(g));
    EXPECT_NEAR(sigma, expected, 1e-6 * expected);
  }
}

TEST(Gsv, SingularInputThrows) {
  EXPECT_THROW(smallest_gsv(to_complex(Matrix::from_rows({{1, 1}, {1, 1}})), Matrix::identity(2)), SingularMatrix);
}

TEST(Gsv, DeterministicForSeed) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  CMatrix c(8, 8);
  for (Complex& z : c.data()) z = Complex(normal(rng), normal(rng));
  const Matrix g = Matrix::identity(8);
  EXPECT_EQ(smallest_gsv(c, g), smallest_gsv(c, g));
}
