#include <algorithm>
#include <cmath>
#include <numeric>

#include "platelab/linalg.hpp"

namespace platelab::linalg {

namespace {

bool finite(double x) { return std::isfinite(x); }
bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require(bool ok, const char* what) {
  if (!ok) throw DimensionMismatch(what);
}

}  // namespace

template <class T>
DenseMatrix<T>::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require(data_.size() == rows * cols, "DenseMatrix: entry count does not match shape");
  for (const T& v : data_) {
    if (!finite(v)) throw ParameterError("DenseMatrix: non-finite entry");
  }
}

template <class T>
DenseMatrix<T> DenseMatrix<T>::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
  return m;
}

template <class T>
DenseMatrix<T> DenseMatrix<T>::from_rows(std::initializer_list<std::initializer_list<T>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<T> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    require(row.size() == c, "DenseMatrix::from_rows: ragged rows");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return DenseMatrix(r, c, std::move(entries));
}

template <class T>
DenseMatrix<T> multiply(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  require(a.cols() == b.rows(), "multiply: inner dimensions differ");
  DenseMatrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      if (aik == T{}) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

namespace {

template <class T>
std::vector<T> matvec(const DenseMatrix<T>& a, std::span<const T> x) {
  require(a.cols() == x.size(), "multiply: vector length differs");
  std::vector<T> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    T s{};
    for (std::size_t j = 0; j < x.size(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
  return y;
}

}  // namespace

Vector multiply(const Matrix& a, std::span<const double> x) { return matvec(a, x); }
CVector multiply(const CMatrix& a, std::span<const Complex> x) { return matvec(a, x); }

CVector multiply(const Matrix& a, std::span<const Complex> x) {
  require(a.cols() == x.size(), "multiply: vector length differs");
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      re += ai[j] * x[j].real();
      im += ai[j] * x[j].imag();
    }
    y[i] = {re, im};
  }
  return y;
}

template <class T>
DenseMatrix<T> transpose(const DenseMatrix<T>& a) {
  DenseMatrix<T> t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

CMatrix adjoint(const CMatrix& a) {
  CMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

CMatrix to_complex(const Matrix& a) {
  CMatrix c(a.rows(), a.cols());
  auto src = a.data();
  auto dst = c.data();
  std::copy(src.begin(), src.end(), dst.begin());
  return c;
}

template <class T>
DenseMatrix<T> add(const DenseMatrix<T>& a, const DenseMatrix<T>& b, T b_scale) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "add: shapes differ");
  DenseMatrix<T> c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t k = 0; k < cd.size(); ++k) cd[k] += b_scale * bd[k];
  return c;
}

template <class T>
double norm_inf(const DenseMatrix<T>& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (const T& v : a.row(i)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

template <class T>
double norm_fro(const DenseMatrix<T>& a) {
  double s = 0.0;
  for (const T& v : a.data()) s += std::norm(v);
  return std::sqrt(s);
}

double dot(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "dot: lengths differ");
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double norm2(std::span<const Complex> x) {
  double s = 0.0;
  for (const Complex& z : x) s += std::norm(z);
  return std::sqrt(s);
}

double quadratic_form(const Matrix& a, std::span<const double> x, std::span<const double> y) {
  require(a.rows() == x.size() && a.cols() == y.size(), "quadratic_form: shapes differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    double t = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) t += ai[j] * y[j];
    s += x[i] * t;
  }
  return s;
}

double quadratic_form(const Matrix& a, std::span<const Complex> x) {
  const CVector ax = multiply(a, x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (std::conj(x[i]) * ax[i]).real();
  return s;
}

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (!a.is_square()) return false;
  const double scale = rel_tol * norm_inf(a);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > scale) return false;
  return true;
}

template class DenseMatrix<double>;
template class DenseMatrix<Complex>;
template Matrix multiply(const Matrix&, const Matrix&);
template CMatrix multiply(const CMatrix&, const CMatrix&);
template Matrix transpose(const Matrix&);
template CMatrix transpose(const CMatrix&);
template Matrix add(const Matrix&, const Matrix&, double);
template CMatrix add(const CMatrix&, const CMatrix&, Complex);
template double norm_inf(const Matrix&);
template double norm_inf(const CMatrix&);
template double norm_fro(const Matrix&);
template double norm_fro(const CMatrix&);

}  // namespace platelab::linalg
