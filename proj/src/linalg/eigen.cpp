#include <algorithm>
#include <cmath>
#include <limits>

#include "platelab/linalg.hpp"

namespace platelab::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Diagonal similarity by powers of two so that row and column norms are
// comparable. Returns D with A_balanced = D^{-1} A D.
Vector balance(Matrix& a) {
  const std::size_t n = a.rows();
  Vector scale(n, 1.0);
  constexpr double radix = 2.0;
  constexpr double radix2 = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / radix;
      while (c < g) {
        f *= radix;
        c *= radix2;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix2;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        scale[i] *= f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) /= f;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
  return scale;
}

// Householder reduction to upper Hessenberg form, H = Q^T A Q.
Matrix hessenberg(Matrix& h) {
  const std::size_t n = h.rows();
  Matrix q = Matrix::identity(n);
  Vector v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha += h(i, k) * h(i, k);
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    if (h(k + 1, k) > 0.0) alpha = -alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = h(i, k);
      if (i == k + 1) v[i] -= alpha;
      vnorm2 += v[i] * v[i];
    }
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;
    // H <- (I - beta v v^T) H
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += v[i] * h(i, j);
      s *= beta;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
    }
    // H <- H (I - beta v v^T), Q <- Q (I - beta v v^T)
    for (Matrix* m : {&h, &q}) {
      for (std::size_t i = 0; i < n; ++i) {
        auto row = m->row(i);
        double s = 0.0;
        for (std::size_t j = k + 1; j < n; ++j) s += row[j] * v[j];
        s *= beta;
        for (std::size_t j = k + 1; j < n; ++j) row[j] -= s * v[j];
      }
    }
    h(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
  return q;
}

struct Reflector {
  double v[3] = {0.0, 0.0, 0.0};
  double beta = 0.0;
  int len = 0;
};

Reflector make_reflector(double x, double y, double z, int len) {
  Reflector r;
  r.len = len;
  const double norm = len == 3 ? std::sqrt(x * x + y * y + z * z) : std::hypot(x, y);
  if (norm == 0.0) return r;
  const double alpha = x > 0.0 ? -norm : norm;
  r.v[0] = x - alpha;
  r.v[1] = y;
  r.v[2] = len == 3 ? z : 0.0;
  const double vv = r.v[0] * r.v[0] + r.v[1] * r.v[1] + r.v[2] * r.v[2];
  r.beta = vv == 0.0 ? 0.0 : 2.0 / vv;
  return r;
}

void apply_left(Matrix& h, const Reflector& r, std::size_t k, std::size_t col_lo, std::size_t col_hi) {
  if (r.beta == 0.0) return;
  for (std::size_t j = col_lo; j <= col_hi; ++j) {
    double s = 0.0;
    for (int t = 0; t < r.len; ++t) s += r.v[t] * h(k + t, j);
    s *= r.beta;
    for (int t = 0; t < r.len; ++t) h(k + t, j) -= s * r.v[t];
  }
}

void apply_right(Matrix& h, const Reflector& r, std::size_t k, std::size_t row_lo, std::size_t row_hi) {
  if (r.beta == 0.0) return;
  for (std::size_t i = row_lo; i <= row_hi; ++i) {
    double s = 0.0;
    for (int t = 0; t < r.len; ++t) s += h(i, k + t) * r.v[t];
    s *= r.beta;
    for (int t = 0; t < r.len; ++t) h(i, k + t) -= s * r.v[t];
  }
}

// One implicit double-shift (Francis) sweep on the unreduced window [l, m]
// with shifts given by their sum and product.
void francis_sweep(Matrix& h, std::size_t l, std::size_t m, double shift_sum, double shift_prod) {
  double x = h(l, l) * h(l, l) + h(l, l + 1) * h(l + 1, l) - shift_sum * h(l, l) + shift_prod;
  double y = h(l + 1, l) * (h(l, l) + h(l + 1, l + 1) - shift_sum);
  double z = h(l + 1, l) * h(l + 2, l + 1);
  for (std::size_t k = l; k + 2 <= m; ++k) {
    const Reflector r = make_reflector(x, y, z, 3);
    const std::size_t q = k > l ? k - 1 : l;
    apply_left(h, r, k, q, m);
    apply_right(h, r, k, l, std::min(k + 3, m));
    if (k > l) {
      h(k + 1, k - 1) = 0.0;
      h(k + 2, k - 1) = 0.0;
    }
    x = h(k + 1, k);
    y = h(k + 2, k);
    if (k + 3 <= m) z = h(k + 3, k);
  }
  const Reflector r = make_reflector(x, y, 0.0, 2);
  apply_left(h, r, m - 1, m - 2, m);
  apply_right(h, r, m - 1, l, m);
  h(m, m - 2) = 0.0;
}

void eig2x2(double a, double b, double c, double d, Complex& e1, Complex& e2) {
  const double p = 0.5 * (a - d);
  const double disc = p * p + b * c;
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    const double t = p + std::copysign(r, p);
    e1 = d + t;
    e2 = t == 0.0 ? Complex(d) : Complex(d - b * c / t);
  } else {
    const double mid = 0.5 * (a + d);
    const double im = std::sqrt(-disc);
    e1 = {mid, im};
    e2 = {mid, -im};
  }
}

struct QrOutcome {
  CVector eigenvalues;
  int iterations = 0;
  bool converged = true;
};

QrOutcome hessenberg_qr(Matrix h, int max_sweeps_per_eigenvalue) {
  const std::size_t n = h.rows();
  QrOutcome out;
  out.eigenvalues.assign(n, Complex(std::nan(""), std::nan("")));
  double hnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = (i > 0 ? i - 1 : 0); j < n; ++j) hnorm = std::max(hnorm, std::abs(h(i, j)));

  const long budget = static_cast<long>(max_sweeps_per_eigenvalue) * static_cast<long>(std::max<std::size_t>(n, 1));
  long total = 0;
  std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
  int local_its = 0;
  while (hi >= 0) {
    // Locate the start of the unreduced block ending at hi.
    std::ptrdiff_t l = hi;
    while (l > 0) {
      const double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      const double scale = s == 0.0 ? hnorm : s;
      if (std::abs(h(l, l - 1)) <= kEps * scale) {
        h(l, l - 1) = 0.0;
        break;
      }
      --l;
    }
    if (l == hi) {
      out.eigenvalues[hi] = h(hi, hi);
      --hi;
      local_its = 0;
      continue;
    }
    if (l == hi - 1) {
      eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi), out.eigenvalues[hi - 1],
             out.eigenvalues[hi]);
      hi -= 2;
      local_its = 0;
      continue;
    }
    if (total >= budget) {
      out.converged = false;
      break;
    }
    ++total;
    ++local_its;
    const auto m = static_cast<std::size_t>(hi);
    double shift_sum = h(m - 1, m - 1) + h(m, m);
    double shift_prod = h(m - 1, m - 1) * h(m, m) - h(m - 1, m) * h(m, m - 1);
    if (local_its % 11 == 0) {
      // Exceptional shift to break stagnation.
      const double s = std::abs(h(m, m - 1)) + std::abs(h(m - 1, m - 2));
      const double re = h(m, m) + 0.75 * s;
      shift_sum = 2.0 * re;
      shift_prod = re * re + 0.140625 * s * s;
    }
    francis_sweep(h, static_cast<std::size_t>(l), m, shift_sum, shift_prod);
  }
  out.iterations = static_cast<int>(total);
  return out;
}

// Solves (H - sigma I) y = b for upper Hessenberg H with adjacent-row
// pivoting; exact-zero pivots are replaced by eps * ||H||.
class HessenbergShiftedSolver {
public:
  HessenbergShiftedSolver(const Matrix& h, Complex sigma, double hnorm)
      : n_(h.rows()), u_(h.rows(), h.rows()), mult_(h.rows()), swapped_(h.rows(), false) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = (i > 0 ? i - 1 : 0); j < n_; ++j) u_(i, j) = h(i, j);
    for (std::size_t i = 0; i < n_; ++i) u_(i, i) -= sigma;
    const double tiny = std::max(kEps * hnorm, std::numeric_limits<double>::min());
    for (std::size_t k = 0; k + 1 < n_; ++k) {
      if (std::abs(u_(k + 1, k)) > std::abs(u_(k, k))) {
        for (std::size_t j = k; j < n_; ++j) std::swap(u_(k, j), u_(k + 1, j));
        swapped_[k] = true;
      }
      if (std::abs(u_(k, k)) < tiny) u_(k, k) = tiny;
      const Complex l = u_(k + 1, k) / u_(k, k);
      mult_[k] = l;
      u_(k + 1, k) = 0.0;
      if (l != Complex{})
        for (std::size_t j = k + 1; j < n_; ++j) u_(k + 1, j) -= l * u_(k, j);
    }
    if (n_ > 0 && std::abs(u_(n_ - 1, n_ - 1)) < tiny) u_(n_ - 1, n_ - 1) = tiny;
  }

  CVector solve(CVector b) const {
    for (std::size_t k = 0; k + 1 < n_; ++k) {
      if (swapped_[k]) std::swap(b[k], b[k + 1]);
      b[k + 1] -= mult_[k] * b[k];
    }
    for (std::size_t i = n_; i-- > 0;) {
      Complex s = b[i];
      for (std::size_t j = i + 1; j < n_; ++j) s -= u_(i, j) * b[j];
      b[i] = s / u_(i, i);
    }
    return b;
  }

private:
  std::size_t n_;
  CMatrix u_;
  CVector mult_;
  std::vector<bool> swapped_;
};

CVector hessenberg_eigenvector(const Matrix& h, Complex lambda, double hnorm) {
  const std::size_t n = h.rows();
  const HessenbergShiftedSolver solver(h, lambda, hnorm);
  CVector y(n);
  // Deterministic start vector with no special structure.
  for (std::size_t i = 0; i < n; ++i) y[i] = 1.0 + 0.5 * std::sin(1.0 + 7.0 * static_cast<double>(i));
  for (int it = 0; it < 3; ++it) {
    y = solver.solve(std::move(y));
    const double nrm = norm2(y);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
    for (Complex& v : y) v /= nrm;
  }
  return y;
}

}  // namespace

EigenResult eig_general(const Matrix& a, const EigOptions& options) {
  if (!a.is_square()) throw DimensionMismatch("eig_general: matrix is not square");
  const std::size_t n = a.rows();
  EigenResult result;
  if (n == 0) {
    result.residual_bound = 0.0;
    return result;
  }

  Matrix h = a;
  Vector scale(n, 1.0);
  if (options.balance) scale = balance(h);
  const Matrix q = hessenberg(h);

  QrOutcome qr = hessenberg_qr(h, options.max_sweeps_per_eigenvalue);
  result.eigenvalues = std::move(qr.eigenvalues);
  result.iterations = qr.iterations;
  result.converged = qr.converged;
  if (!qr.converged) {
    throw NoConvergence("eig_general: QR iteration budget exhausted", result);
  }

  if (!options.vectors) return result;

  double hnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = (i > 0 ? i - 1 : 0); j < n; ++j) hnorm = std::max(hnorm, std::abs(h(i, j)));

  CMatrix vectors(n, n);
  double worst = 0.0;
  CVector x(n);
  CVector prev_y;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex lambda = result.eigenvalues[k];
    CVector y;
    if (k > 0 && lambda.imag() < 0.0 && result.eigenvalues[k - 1] == std::conj(lambda) && !prev_y.empty()) {
      y = prev_y;
      for (Complex& v : y) v = std::conj(v);
    } else {
      y = hessenberg_eigenvector(h, lambda, hnorm);
    }
    // x = D Q y
    for (std::size_t i = 0; i < n; ++i) {
      Complex s{};
      auto qi = q.row(i);
      for (std::size_t j = 0; j < n; ++j) s += qi[j] * y[j];
      x[i] = scale[i] * s;
    }
    const double xn = norm2(x);
    for (std::size_t i = 0; i < n; ++i) vectors(i, k) = xn > 0.0 ? x[i] / xn : x[i];
    prev_y = std::move(y);
  }

  CVector col(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) col[i] = vectors(i, k);
    CVector r = multiply(a, std::span<const Complex>(col));
    for (std::size_t i = 0; i < n; ++i) r[i] -= result.eigenvalues[k] * col[i];
    const double cn = norm2(col);
    worst = std::max(worst, cn > 0.0 ? norm2(r) / cn : std::numeric_limits<double>::infinity());
  }
  result.vectors = std::move(vectors);
  result.residual_bound = worst;
  return result;
}

}  // namespace platelab::linalg
