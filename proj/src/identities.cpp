#include "platelab/identities.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "platelab/errors.hpp"

namespace platelab::identities {

PolyFunction::PolyFunction(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.size() > kMaxDegree + 1) throw ParameterError("identities: polynomial degree exceeds 12");
  for (double c : coeffs_)
    if (!std::isfinite(c)) throw ParameterError("identities: non-finite coefficient");
}

double PolyFunction::evaluate(std::span<const double> c, double x) {
  double s = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) s = s * x + c[k];
  return s;
}

double PolyFunction::operator()(double x) const { return evaluate(coeffs_, x); }

PolyFunction PolyFunction::derivative(int order) const {
  std::vector<double> c = coeffs_;
  for (int o = 0; o < order; ++o) {
    if (c.size() <= 1) return PolyFunction(std::vector<double>{});
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
    c = std::move(d);
  }
  return PolyFunction(std::move(c));
}

PolyFunction PolyFunction::scaled(double factor) const {
  std::vector<double> c = coeffs_;
  for (double& v : c) v *= factor;
  return PolyFunction(std::move(c));
}

std::vector<double> PolyFunction::multiply(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

namespace {

constexpr std::size_t kGaussPoints = 16;

struct GaussRule {
  std::array<double, kGaussPoints> nodes{};
  std::array<double, kGaussPoints> weights{};
};

// Nodes and weights on [-1, 1] by Newton iteration on P_n.
GaussRule make_gauss_rule() {
  GaussRule rule;
  constexpr std::size_t n = kGaussPoints;
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 - (static_cast<double>(k) - 1.0) * p0) /
                          static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& gauss_rule() {
  static const GaussRule rule = make_gauss_rule();
  return rule;
}

void check_interval(const Interval& iv) {
  if (!(iv.beta > iv.alpha) || !std::isfinite(iv.alpha) || !std::isfinite(iv.beta)) {
    throw DegenerateInterval("identities: interval must satisfy alpha < beta");
  }
}

const std::vector<double> kIdentity{0.0, 1.0};  // the polynomial x

double max_abs(const std::vector<double>& terms) {
  double m = 0.0;
  for (double t : terms) m = std::max(m, std::abs(t));
  return m;
}

// Boundary contribution nu * (x w' w''' - w'' (x w')') at one end point.
double flux_term(const PolyFunction& w, double x, double normal) {
  const PolyFunction xw1(PolyFunction::multiply(kIdentity, w.derivative(1).coefficients()));
  const double xw1_value = xw1(x);
  const double xw1_slope = xw1.derivative(1)(x);
  return normal * (xw1_value * w.derivative(3)(x) - w.derivative(2)(x) * xw1_slope);
}

#ifdef PLATELAB_MUTATE_RELLICH_SIGN
constexpr double kFluxSign = -2.0;
#else
constexpr double kFluxSign = 2.0;
#endif

}  // namespace

double integrate(std::span<const double> coefficients, const Interval& interval) {
  check_interval(interval);
  const GaussRule& rule = gauss_rule();
  const double half = 0.5 * (interval.beta - interval.alpha);
  const double mid = 0.5 * (interval.beta + interval.alpha);
  double s = 0.0;
  for (std::size_t i = 0; i < kGaussPoints; ++i) {
    s += rule.weights[i] * PolyFunction::evaluate(coefficients, mid + half * rule.nodes[i]);
  }
  return half * s;
}

IdentityResidual rellich_residual(const PolyFunction& w, const Interval& interval) {
  check_interval(interval);
  const auto w1 = w.derivative(1);
  const auto w2 = w.derivative(2);
  const auto w4 = w.derivative(4);

  const double lhs =
      2.0 * integrate(PolyFunction::multiply(PolyFunction::multiply(kIdentity, w1.coefficients()), w4.coefficients()),
                      interval);
  const double bulk = 3.0 * integrate(PolyFunction::multiply(w2.coefficients(), w2.coefficients()), interval);
  const double a = interval.alpha;
  const double b = interval.beta;
  const double curv_left = -a * w2(a) * w2(a);
  const double curv_right = b * w2(b) * w2(b);
  const double flux_left = kFluxSign * flux_term(w, a, -1.0);
  const double flux_right = kFluxSign * flux_term(w, b, 1.0);

  IdentityResidual out;
  out.terms = {lhs, bulk, curv_left, curv_right, flux_left, flux_right};
  out.residual = std::abs(lhs - (bulk + curv_left + curv_right + flux_left + flux_right));
  out.scale = max_abs(out.terms);
  return out;
}

IdentityResidual rellich_shifted_residual(const PolyFunction& w, double lambda, const Interval& interval) {
  check_interval(interval);
  const double l2 = lambda * lambda;
  const auto w1 = w.derivative(1);
  const auto w2 = w.derivative(2);
  const auto w4 = w.derivative(4);

  // z = -w'''' + lambda^2 w
  std::vector<double> z(std::max(w.coefficients().size(), w4.coefficients().size()), 0.0);
  for (std::size_t k = 0; k < w.coefficients().size(); ++k) z[k] += l2 * w.coefficients()[k];
  for (std::size_t k = 0; k < w4.coefficients().size(); ++k) z[k] -= w4.coefficients()[k];

  const double a = interval.alpha;
  const double b = interval.beta;
  const double mass = l2 * integrate(PolyFunction::multiply(w.coefficients(), w.coefficients()), interval);
  const double bulk = 3.0 * integrate(PolyFunction::multiply(w2.coefficients(), w2.coefficients()), interval);
  const double curv = -a * w2(a) * w2(a) + b * w2(b) * w2(b);
  const double source =
      -2.0 * integrate(PolyFunction::multiply(PolyFunction::multiply(kIdentity, w1.coefficients()), z), interval);
  const double trace = l2 * (-a * w(a) * w(a) + b * w(b) * w(b));
  const double flux = -kFluxSign * (flux_term(w, a, -1.0) + flux_term(w, b, 1.0));

  IdentityResidual out;
  out.terms = {mass, bulk, curv, source, trace, flux};
  out.residual = std::abs((mass + bulk + curv) - (source + trace + flux));
  out.scale = max_abs(out.terms);
  return out;
}

IdentityResidual boundary_identity_residual(const PolyFunction& w, double s, double normal) {
  if (normal != 1.0 && normal != -1.0) throw ParameterError("identities: normal must be +1 or -1");
  double scale = 0.0;
  const auto c = w.coefficients();
  const double r = std::max(1.0, std::abs(s));
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double kk = static_cast<double>(k);
    scale += std::abs(c[k]) * std::pow(r, kk) * (1.0 + kk + kk * kk);
  }
  const double tol = 1e-13 * std::max(scale, 1e-300);
  if (std::abs(w(s)) > tol || std::abs(w.derivative(1)(s)) > tol) {
    throw PreconditionViolated("identities: w and w' must vanish at the boundary point");
  }
  const PolyFunction xw1(PolyFunction::multiply(kIdentity, w.derivative(1).coefficients()));
  const double normal_derivative = normal * xw1.derivative(1)(s);
  const double laplacian_term = normal * s * w.derivative(2)(s);

  IdentityResidual out;
  out.terms = {normal_derivative, laplacian_term};
  out.residual = std::abs(normal_derivative - laplacian_term);
  out.scale = std::max(scale, max_abs(out.terms));
  return out;
}

}  // namespace platelab::identities
