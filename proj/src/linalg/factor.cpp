#include <algorithm>
#include <cmath>
#include <type_traits>
#include <utility>

#include "platelab/linalg.hpp"

namespace platelab::linalg {

namespace {

template <class T>
T conj_of(const T& v) {
  if constexpr (std::is_same_v<T, Complex>) {
    return std::conj(v);
  } else {
    return v;
  }
}

constexpr double kPivotThreshold = 1e-14;

}  // namespace

template <class T>
LuFactorization<T>::LuFactorization(DenseMatrix<T> a) : lu_(std::move(a)) {
  if (!lu_.is_square()) throw DimensionMismatch("LU: matrix is not square");
  const std::size_t n = lu_.rows();
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  norm_ = norm_inf(lu_);
  const double threshold = kPivotThreshold * norm_;
  if (n > 0 && norm_ == 0.0) throw SingularMatrix("LU: zero matrix");

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best <= threshold) throw SingularMatrix("LU: pivot below threshold");
    if (p != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
      std::swap(perm_[k], perm_[p]);
    }
    const T pivot = lu_(k, k);
    auto rk = lu_.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto ri = lu_.row(i);
      const T l = ri[k] / pivot;
      ri[k] = l;
      if (l == T{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= l * rk[j];
    }
  }
}

template <class T>
std::vector<T> LuFactorization<T>::solve(std::span<const T> b) const {
  const std::size_t n = size();
  if (b.size() != n) throw DimensionMismatch("LU solve: right-hand side length");
  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    auto ri = lu_.row(i);
    T s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= ri[j] * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    auto ri = lu_.row(i);
    T s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= ri[j] * x[j];
    x[i] = s / ri[i];
  }
  return x;
}

template <class T>
DenseMatrix<T> LuFactorization<T>::solve(const DenseMatrix<T>& b) const {
  const std::size_t n = size();
  if (b.rows() != n) throw DimensionMismatch("LU solve: right-hand side rows");
  const std::size_t m = b.cols();
  DenseMatrix<T> x(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    auto src = b.row(perm_[i]);
    std::copy(src.begin(), src.end(), x.row(i).begin());
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    for (std::size_t j = 0; j < i; ++j) {
      const T l = lu_(i, j);
      if (l == T{}) continue;
      auto xj = x.row(j);
      for (std::size_t c = 0; c < m; ++c) xi[c] -= l * xj[c];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    auto xi = x.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const T u = lu_(i, j);
      if (u == T{}) continue;
      auto xj = x.row(j);
      for (std::size_t c = 0; c < m; ++c) xi[c] -= u * xj[c];
    }
    const T d = lu_(i, i);
    for (std::size_t c = 0; c < m; ++c) xi[c] /= d;
  }
  return x;
}

template <class T>
std::vector<T> LuFactorization<T>::solve_adjoint(std::span<const T> b) const {
  // A^H = U^H L^H P, so solve U^H y = b, L^H z = y, x = P^T z.
  const std::size_t n = size();
  if (b.size() != n) throw DimensionMismatch("LU solve_adjoint: right-hand side length");
  std::vector<T> y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    T s = y[i];
    for (std::size_t j = 0; j < i; ++j) s -= conj_of(lu_(j, i)) * y[j];
    y[i] = s / conj_of(lu_(i, i));
  }
  for (std::size_t i = n; i-- > 0;) {
    T s = y[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= conj_of(lu_(j, i)) * y[j];
    y[i] = s;
  }
  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[perm_[i]] = y[i];
  return x;
}

template <class T>
DenseMatrix<T> lu_solve(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  return LuFactorization<T>(a).solve(b);
}

template class LuFactorization<double>;
template class LuFactorization<Complex>;
template Matrix lu_solve(const Matrix&, const Matrix&);
template CMatrix lu_solve(const CMatrix&, const CMatrix&);

// ---- Cholesky -------------------------------------------------------------

Cholesky::Cholesky(const Matrix& a) : l_(a.rows(), a.cols()) {
  if (!a.is_square()) throw DimensionMismatch("Cholesky: matrix is not square");
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
    if (!(d > 0.0)) throw NotPositiveDefinite("Cholesky: matrix is not positive definite");
    const double ljj = std::sqrt(d);
    l_(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      auto li = l_.row(i);
      auto lj = l_.row(j);
      for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
      l_(i, j) = s / ljj;
    }
  }
}

namespace {

template <class T>
std::vector<T> cholesky_solve(const Matrix& l, std::span<const T> b) {
  const std::size_t n = l.rows();
  if (b.size() != n) throw DimensionMismatch("Cholesky solve: right-hand side length");
  std::vector<T> x(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    auto li = l.row(i);
    T s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= li[k] * x[k];
    x[i] = s / li[i];
  }
  for (std::size_t i = n; i-- > 0;) {
    T s = x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
    x[i] = s / l(i, i);
  }
  return x;
}

}  // namespace

Vector Cholesky::solve(std::span<const double> b) const { return cholesky_solve(l_, b); }

CVector Cholesky::solve(std::span<const Complex> b) const { return cholesky_solve(l_, b); }

Matrix Cholesky::solve(const Matrix& b) const {
  const std::size_t n = size();
  if (b.rows() != n) throw DimensionMismatch("Cholesky solve: right-hand side rows");
  Matrix x(n, b.cols());
  Vector col(n);
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) col[i] = b(i, c);
    const Vector s = solve(col);
    for (std::size_t i = 0; i < n; ++i) x(i, c) = s[i];
  }
  return x;
}

CVector Cholesky::apply_upper(std::span<const Complex> x) const {
  const std::size_t n = size();
  if (x.size() != n) throw DimensionMismatch("Cholesky apply_upper: length");
  CVector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s{};
    for (std::size_t k = i; k < n; ++k) s += l_(k, i) * x[k];
    y[i] = s;
  }
  return y;
}

}  // namespace platelab::linalg
