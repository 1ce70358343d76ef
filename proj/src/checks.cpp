#include <algorithm>
#include <cmath>
#include <random>

#include "platelab/cli.hpp"
#include "platelab/fem.hpp"
#include "platelab/identities.hpp"
#include "platelab/operator.hpp"

namespace platelab::cli {

namespace {

Check bounded(std::string name, std::string claim, double measured, double tolerance, std::string note = {}) {
  Check c;
  c.name = std::move(name);
  c.claim = std::move(claim);
  c.measured = measured;
  c.tolerance = tolerance;
  c.passed = std::isfinite(measured) && measured <= tolerance;
  c.note = std::move(note);
  return c;
}

std::vector<double> random_coefficients(std::mt19937_64& rng, std::size_t degree) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> c(degree + 1);
  for (double& x : c) x = coef(rng);
  return c;
}

identities::Interval random_interval(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> end(-2.0, 2.0);
  double a = end(rng);
  double b = end(rng);
  while (std::abs(b - a) < 0.05) b = end(rng);
  return {std::min(a, b), std::max(a, b)};
}

op::StateVector random_state(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> normal;
  op::StateVector s = op::StateVector::zero(n);
  for (double& x : s.u) x = normal(rng);
  for (double& x : s.v) x = normal(rng);
  return s;
}

}  // namespace

std::vector<Check> identity_checks(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Check> checks;

  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const identities::PolyFunction w(random_coefficients(rng, 8));
    worst = std::max(worst, identities::rellich_residual(w, random_interval(rng)).relative());
  }
  checks.push_back(bounded("rellich_identity", "Rellich multiplier identity for x.grad w", worst, 1e-11,
                           "100 random degree-8 polynomials"));

  worst = 0.0;
  const double lambdas[] = {1.0, 10.0, 100.0};
  for (int trial = 0; trial < 100; ++trial) {
    const identities::PolyFunction w(random_coefficients(rng, 6));
    const double lambda = lambdas[trial % 3];
    worst = std::max(worst, identities::rellich_shifted_residual(w, lambda, random_interval(rng)).relative());
  }
  checks.push_back(bounded("rellich_shifted_identity", "multiplier identity for -w'''' + lambda^2 w = z", worst,
                           1e-11, "100 random degree-6 polynomials, lambda in {1, 10, 100}"));

  worst = 0.0;
  std::uniform_real_distribution<double> point(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double s = point(rng);
    const std::vector<double> square{s * s, -2.0 * s, 1.0};
    const std::vector<double> q = random_coefficients(rng, 5);
    const identities::PolyFunction w(identities::PolyFunction::multiply(square, q));
    const double normal = trial % 2 == 0 ? 1.0 : -1.0;
    worst = std::max(worst, identities::boundary_identity_residual(w, s, normal).relative());
  }
  checks.push_back(bounded("clamped_boundary_identity", "w = w' = 0 on the boundary gives nu (x w')' = nu s w''",
                           worst, 1e-13, "w = (x - s)^2 q, 100 trials"));
  return checks;
}

std::vector<Check> operator_checks(const DomainConfig& config) {
  validate(config);
  std::mt19937_64 rng(config.seed);
  const fem::HermiteSpace space = fem::build_space(build_mesh(config));
  std::vector<Check> checks;

  // Constructing the system factors K, M and M + K + rho D0; failure means a
  // form is not coercive.
  const op::FirstOrderSystem sys(fem::assemble(space), config.rho);
  const std::size_t n = sys.n_dof();
  {
    Check c;
    c.name = "coercivity";
    c.claim = "bending and shifted forms are coercive on the clamped space";
    c.measured = 1.0;
    c.tolerance = 1.0;
    c.passed = true;
    c.note = "Cholesky of K, M and M + K + rho D0 succeeded";
    checks.push_back(c);
  }

  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const op::StateVector s = random_state(rng, n);
    const double expected = -sys.rho() * linalg::quadratic_form(sys.forms().damping, s.v, s.v);
    const double norm2 = sys.gram().inner(s, s);
    worst = std::max(worst, std::abs(op::dissipation_form(sys, s) - expected) / norm2);
  }
  checks.push_back(bounded("dissipativity", "Re <AU, U> = -rho int_damped |grad v|^2", worst, 1e-12,
                           "100 random states, relative to ||U||^2"));

  worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    worst = std::max(worst, op::lax_milgram_solve_shifted(sys, random_state(rng, n)).residual);
  }
  checks.push_back(bounded("shifted_solve", "1 - A is onto (Lax-Milgram)", worst, 1e-10, "50 random right-hand sides"));

  worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const op::StateVector rhs = random_state(rng, n);
    const op::SolveResult solved = op::solve_inverse(sys, rhs);
    op::StateVector back = sys.apply(solved.state);
    for (std::size_t i = 0; i < n; ++i) {
      back.u[i] = -back.u[i] - rhs.u[i];
      back.v[i] = -back.v[i] - rhs.v[i];
    }
    worst = std::max(worst, sys.gram().norm(back) / sys.gram().norm(rhs));
  }
  checks.push_back(bounded("inverse_round_trip", "A is boundedly invertible", worst, 1e-10,
                           "||-A A^{-1} F - F|| / ||F||, 50 trials"));

  const Mesh1D& mesh = space.mesh;
  worst = 0.0;
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> coeffs(n);
    for (double& x : coeffs) x = normal(rng);
    for (std::size_t node : {mesh.node_a, mesh.node_b}) {
      const double x = mesh.nodes[node];
      const fem::PointValue left = fem::evaluate(space, coeffs, node - 1, x);
      const fem::PointValue right = fem::evaluate(space, coeffs, node, x);
      const double scale = std::max({1.0, std::abs(left.value), std::abs(left.slope)});
      worst = std::max({worst, std::abs(left.value - right.value) / scale,
                        std::abs(left.slope - right.slope) / scale});
    }
  }
  checks.push_back(bounded("interface_continuity", "u and u' are continuous across the interfaces", worst, 1e-12,
                           "20 random discrete fields"));
  return checks;
}

}  // namespace platelab::cli
