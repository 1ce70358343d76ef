#pragma once

// Dense kernels: row-major matrices, LU with partial pivoting, Cholesky,
// a real nonsymmetric eigensolver (balancing, Hessenberg reduction, Francis
// double-shift QR, inverse-iteration eigenvectors) and the smallest
// generalized singular value min ||Cx||_G / ||x||_G by inverse iteration.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "platelab/errors.hpp"

namespace platelab::linalg {

using Complex = std::complex<double>;

template <class T>
class DenseMatrix {
public:
  using value_type = T;

  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// Takes ownership of row-major entries; rejects NaN/Inf.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<T> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<T>> rows);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  [[nodiscard]] std::span<T> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  [[nodiscard]] std::span<const T> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  [[nodiscard]] std::span<T> data() noexcept { return data_; }
  [[nodiscard]] std::span<const T> data() const noexcept { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Matrix = DenseMatrix<double>;
using CMatrix = DenseMatrix<Complex>;
using Vector = std::vector<double>;
using CVector = std::vector<Complex>;

// ---- elementary operations -------------------------------------------------

template <class T>
DenseMatrix<T> multiply(const DenseMatrix<T>& a, const DenseMatrix<T>& b);
Vector multiply(const Matrix& a, std::span<const double> x);
CVector multiply(const CMatrix& a, std::span<const Complex> x);
CVector multiply(const Matrix& a, std::span<const Complex> x);

template <class T>
DenseMatrix<T> transpose(const DenseMatrix<T>& a);
CMatrix adjoint(const CMatrix& a);
CMatrix to_complex(const Matrix& a);

template <class T>
DenseMatrix<T> add(const DenseMatrix<T>& a, const DenseMatrix<T>& b, T b_scale = T{1});

/// Max absolute row sum.
template <class T>
double norm_inf(const DenseMatrix<T>& a);
template <class T>
double norm_fro(const DenseMatrix<T>& a);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double norm2(std::span<const Complex> x);

/// x^T A y for real symmetric A.
double quadratic_form(const Matrix& a, std::span<const double> x, std::span<const double> y);
/// Re(x^H A x) for real A.
double quadratic_form(const Matrix& a, std::span<const Complex> x);

bool is_symmetric(const Matrix& a, double rel_tol = 0.0);

// ---- factorizations --------------------------------------------------------

/// PA = LU with partial pivoting. Throws SingularMatrix when a pivot falls
/// below 1e-14 * ||A||_inf.
template <class T>
class LuFactorization {
public:
  explicit LuFactorization(DenseMatrix<T> a);

  [[nodiscard]] std::size_t size() const noexcept { return lu_.rows(); }
  [[nodiscard]] std::vector<T> solve(std::span<const T> b) const;
  [[nodiscard]] DenseMatrix<T> solve(const DenseMatrix<T>& b) const;
  /// Solves A^H x = b.
  [[nodiscard]] std::vector<T> solve_adjoint(std::span<const T> b) const;
  [[nodiscard]] double norm() const noexcept { return norm_; }

private:
  DenseMatrix<T> lu_;
  std::vector<std::size_t> perm_;
  double norm_ = 0.0;
};

template <class T>
DenseMatrix<T> lu_solve(const DenseMatrix<T>& a, const DenseMatrix<T>& b);

/// A = L L^T for symmetric positive definite A.
class Cholesky {
public:
  explicit Cholesky(const Matrix& a);

  [[nodiscard]] std::size_t size() const noexcept { return l_.rows(); }
  [[nodiscard]] const Matrix& lower() const noexcept { return l_; }

  [[nodiscard]] Vector solve(std::span<const double> b) const;
  [[nodiscard]] CVector solve(std::span<const Complex> b) const;
  [[nodiscard]] Matrix solve(const Matrix& b) const;

  /// y = L^T x, so that x^T A x = ||y||^2.
  [[nodiscard]] CVector apply_upper(std::span<const Complex> x) const;

private:
  Matrix l_;
};

// ---- eigenvalues -----------------------------------------------------------

struct EigenResult {
  CVector eigenvalues;
  /// Right eigenvectors as columns, normalized to unit 2-norm.
  std::optional<CMatrix> vectors;
  /// max_k ||A v_k - lambda_k v_k|| / ||v_k||; NaN when vectors were not computed.
  double residual_bound = std::nan("");
  bool converged = true;
  int iterations = 0;
};

class NoConvergence : public Error {
public:
  NoConvergence(const std::string& what, EigenResult partial)
      : Error(what), partial_(std::move(partial)) {}
  [[nodiscard]] const EigenResult& partial() const noexcept { return partial_; }

private:
  EigenResult partial_;
};

struct EigOptions {
  bool vectors = true;
  bool balance = true;
  int max_sweeps_per_eigenvalue = 40;
};

EigenResult eig_general(const Matrix& a, const EigOptions& options = {});

// ---- smallest generalized singular value ----------------------------------

struct GsvOptions {
  std::uint64_t seed = 42;
  double rel_tol = 1e-10;
  int max_iterations = 400;
};

struct GsvResult {
  double sigma = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// sigma = min_{x != 0} ||Cx||_G / ||x||_G by inverse iteration on the pencil
/// (C^H G C, G). Throws SingularMatrix when C is numerically singular.
GsvResult smallest_gsv(const CMatrix& c, const Cholesky& g_factor, const Matrix& g,
                       const GsvOptions& options = {});
double smallest_gsv(const CMatrix& c, const Matrix& g, const GsvOptions& options = {});

}  // namespace platelab::linalg
