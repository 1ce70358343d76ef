#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "platelab/linalg.hpp"

namespace platelab::linalg {

namespace {

// x^H G y for real symmetric G, given gy = G y.
Complex g_inner(std::span<const Complex> x, std::span<const Complex> gy) {
  Complex s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * gy[i];
  return s;
}

double g_norm(const Matrix& g, std::span<const Complex> x) {
  return std::sqrt(std::max(0.0, quadratic_form(g, x)));
}

// Largest eigenpair of a small symmetric matrix by cyclic Jacobi rotations.
void jacobi_largest(Matrix a, double& theta, Vector& vec) {
  const std::size_t n = a.rows();
  Matrix v = Matrix::identity(n);
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= 1e-30 * (norm_fro(a) * norm_fro(a) + std::numeric_limits<double>::min())) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (a(i, i) > a(best, best)) best = i;
  theta = a(best, best);
  vec.resize(n);
  for (std::size_t i = 0; i < n; ++i) vec[i] = v(i, best);
}

}  // namespace

// The operator T = C^{-1} G^{-1} C^{-H} G is self-adjoint and positive in the
// G inner product, with largest eigenvalue 1 / sigma^2. Inverse iteration with
// T is accelerated by restarted Lanczos (full reorthogonalization in the G
// inner product); each restart begins from the current best Ritz vector.
GsvResult smallest_gsv(const CMatrix& c, const Cholesky& g_factor, const Matrix& g,
                       const GsvOptions& options) {
  if (!c.is_square() || c.rows() != g.rows() || g.rows() != g_factor.size()) {
    throw DimensionMismatch("smallest_gsv: C and G must be square of equal size");
  }
  const std::size_t n = c.rows();
  GsvResult out;
  if (n == 0) return out;

  const LuFactorization<Complex> lu(c);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector x(n);
  for (Complex& v : x) {
    const double re = normal(rng);
    const double im = normal(rng);
    v = {re, im};
  }

  // Lower estimate of ||C||_G by a few power steps, used for the
  // singularity threshold only.
  double c_norm = 0.0;
  {
    const CMatrix c_adj = adjoint(c);
    CVector p = x;
    for (int it = 0; it < 6; ++it) {
      const double pn = g_norm(g, p);
      for (Complex& v : p) v /= pn;
      const CVector cp = multiply(c, std::span<const Complex>(p));
      c_norm = std::max(c_norm, g_norm(g, cp));
      const CVector gcp = multiply(g, std::span<const Complex>(cp));
      p = g_factor.solve(std::span<const Complex>(multiply(c_adj, std::span<const Complex>(gcp))));
    }
  }

  auto apply_t = [&](const CVector& v) {
    CVector y = multiply(g, std::span<const Complex>(v));
    y = lu.solve_adjoint(y);
    y = g_factor.solve(std::span<const Complex>(y));
    return lu.solve(y);
  };

  const std::size_t krylov = std::min<std::size_t>(n, 40);
  const int max_restarts = std::max(1, options.max_iterations / static_cast<int>(krylov) + 1);
  std::vector<CVector> basis;
  std::vector<CVector> g_basis;
  double theta = 0.0;
  int applications = 0;

  for (int restart = 0; restart < max_restarts && !out.converged; ++restart) {
    basis.clear();
    g_basis.clear();
    CVector gx = multiply(g, std::span<const Complex>(x));
    const double xn = std::sqrt(std::max(0.0, g_inner(x, gx).real()));
    for (std::size_t i = 0; i < n; ++i) {
      x[i] /= xn;
      gx[i] /= xn;
    }
    basis.push_back(x);
    g_basis.push_back(gx);
    std::vector<double> alpha;
    std::vector<double> beta;
    Vector ritz;
    for (std::size_t k = 0; k < krylov; ++k) {
      CVector w = apply_t(basis[k]);
      ++applications;
      CVector gw = multiply(g, std::span<const Complex>(w));
      alpha.push_back(g_inner(basis[k], gw).real());
      // Full reorthogonalization (twice) against the basis.
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j <= k; ++j) {
          const Complex h = g_inner(basis[j], gw);
          for (std::size_t i = 0; i < n; ++i) {
            w[i] -= h * basis[j][i];
            gw[i] -= h * g_basis[j][i];
          }
        }
      }
      const double b = std::sqrt(std::max(0.0, g_inner(w, gw).real()));

      const std::size_t m = k + 1;
      const bool last = m == krylov || b <= std::numeric_limits<double>::epsilon() * std::abs(alpha[0]);
      if (m % 4 != 0 && !last) {
        beta.push_back(b);
        for (std::size_t i = 0; i < n; ++i) {
          w[i] /= b;
          gw[i] /= b;
        }
        basis.push_back(std::move(w));
        g_basis.push_back(std::move(gw));
        continue;
      }
      Matrix tri(m, m);
      for (std::size_t i = 0; i < m; ++i) {
        tri(i, i) = alpha[i];
        if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
      }
      jacobi_largest(tri, theta, ritz);
      const double estimate = std::abs(b * ritz[m - 1]);
      if (!(theta > 0.0) || !std::isfinite(theta)) throw SingularMatrix("smallest_gsv: iteration diverged");
      if (estimate <= options.rel_tol * theta || b <= std::numeric_limits<double>::epsilon() * theta) {
        out.converged = true;
        break;
      }
      if (m == krylov) break;
      beta.push_back(b);
      for (std::size_t i = 0; i < n; ++i) {
        w[i] /= b;
        gw[i] /= b;
      }
      basis.push_back(std::move(w));
      g_basis.push_back(std::move(gw));
    }
    // Restart from the Ritz vector.
    std::fill(x.begin(), x.end(), Complex{});
    for (std::size_t j = 0; j < ritz.size(); ++j)
      for (std::size_t i = 0; i < n; ++i) x[i] += ritz[j] * basis[j][i];
  }

  out.sigma = 1.0 / std::sqrt(theta);
  out.iterations = applications;
  if (out.sigma <= 1e-14 * c_norm) throw SingularMatrix("smallest_gsv: C is numerically singular");
  return out;
}

double smallest_gsv(const CMatrix& c, const Matrix& g, const GsvOptions& options) {
  const Cholesky g_factor(g);
  return smallest_gsv(c, g_factor, g, options).sigma;
}

}  // namespace platelab::linalg
