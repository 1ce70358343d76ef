#pragma once

// Multiplier identities for the biharmonic operator in one space dimension,
// checked on polynomials by exact Gauss quadrature. With n = 1, x.grad w = x w',
// Delta w = w'', and boundary integrals become end point evaluations with
// outward normal nu = -1 at the left and +1 at the right end.
//
//   Rellich:   2 int x w' w'''' = 3 ||w''||^2 + [nu x |w''|^2]
//                                  + 2 [nu (x w' w''' - w'' (x w')')]
//
//   Shifted:   for -w'''' + lambda^2 w = z,
//              lambda^2 ||w||^2 + 3 ||w''||^2 + [nu x |w''|^2]
//                = -2 int x w' z + lambda^2 [nu x |w|^2]
//                  - 2 [nu (x w' w''' - w'' (x w')')]
//
//   Clamped boundary: w(s) = w'(s) = 0 implies nu (x w')'(s) = nu s w''(s).

#include <cstddef>
#include <span>
#include <vector>

namespace platelab::identities {

inline constexpr std::size_t kMaxDegree = 12;

/// Real polynomial in monomial form, sum_k c_k x^k, of degree at most 12.
class PolyFunction {
public:
  PolyFunction() = default;
  explicit PolyFunction(std::vector<double> coefficients);

  [[nodiscard]] std::span<const double> coefficients() const noexcept { return coeffs_; }
  [[nodiscard]] std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] PolyFunction derivative(int order = 1) const;
  [[nodiscard]] PolyFunction scaled(double factor) const;

  /// Product without the degree cap (used for integrands).
  [[nodiscard]] static std::vector<double> multiply(std::span<const double> a, std::span<const double> b);
  [[nodiscard]] static double evaluate(std::span<const double> c, double x);

private:
  std::vector<double> coeffs_;
};

struct Interval {
  double alpha = 0.0;
  double beta = 1.0;
};

/// Residual of an identity together with the magnitude of its largest
/// individually computed term.
struct IdentityResidual {
  double residual = 0.0;
  double scale = 0.0;
  std::vector<double> terms;

  [[nodiscard]] double relative() const { return scale > 0.0 ? residual / scale : residual; }
};

/// Gauss-Legendre integral of a polynomial (exact up to degree 31).
double integrate(std::span<const double> coefficients, const Interval& interval);

IdentityResidual rellich_residual(const PolyFunction& w, const Interval& interval);
IdentityResidual rellich_shifted_residual(const PolyFunction& w, double lambda, const Interval& interval);

/// `normal` is the outward normal at s (+1 or -1). Throws PreconditionViolated
/// when w(s) or w'(s) exceed 1e-13 times the polynomial's scale at s.
IdentityResidual boundary_identity_residual(const PolyFunction& w, double s, double normal);

}  // namespace platelab::identities
