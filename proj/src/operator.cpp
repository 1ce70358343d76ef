#include "platelab/operator.hpp"

#include <cmath>

#include "platelab/errors.hpp"

namespace platelab::op {

namespace {

void check_size(const StateVector& s, std::size_t n) {
  if (s.u.size() != n || s.v.size() != n) throw DimensionMismatch("state vector has the wrong dimension");
}

Vector axpy(const Vector& x, double a, const Vector& y) {
  Vector out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * y[i];
  return out;
}

StateVector difference(const StateVector& a, const StateVector& b) {
  return {axpy(a.u, -1.0, b.u), axpy(a.v, -1.0, b.v)};
}

double relative(double residual, double reference) { return reference > 0.0 ? residual / reference : residual; }

}  // namespace

EnergyGram::EnergyGram(const fem::AssembledForms& forms) : bending_(forms.bending), mass_(forms.mass) {
  const std::size_t n = bending_.rows();
  g_ = Matrix(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      g_(i, j) = bending_(i, j);
      g_(n + i, n + j) = mass_(i, j);
    }
  }
  factor_ = std::make_shared<const linalg::Cholesky>(g_);
}

double EnergyGram::inner(const StateVector& a, const StateVector& b) const {
  check_size(a, n_dof());
  check_size(b, n_dof());
  return linalg::quadratic_form(bending_, a.u, b.u) + linalg::quadratic_form(mass_, a.v, b.v);
}

double EnergyGram::norm(const StateVector& a) const { return std::sqrt(std::max(0.0, inner(a, a))); }

double energy(const EnergyGram& gram, const StateVector& state) { return 0.5 * gram.inner(state, state); }

FirstOrderSystem::FirstOrderSystem(fem::AssembledForms forms, double rho)
    : forms_(std::move(forms)), rho_(rho), gram_(forms_) {
  if (!std::isfinite(rho_) || rho_ < 0.0) throw ParameterError("operator: rho must be non-negative");
  mass_factor_ = std::make_shared<const linalg::Cholesky>(forms_.mass);
  bending_factor_ = std::make_shared<const linalg::Cholesky>(forms_.bending);
  Matrix shifted = linalg::add(forms_.mass, forms_.bending);
  shifted = linalg::add(shifted, forms_.damping, rho_);
  shifted_factor_ = std::make_shared<const linalg::Cholesky>(shifted);
}

StateVector FirstOrderSystem::apply(const StateVector& state) const {
  check_size(state, n_dof());
  Vector force = linalg::multiply(forms_.bending, state.u);
  const Vector damp = linalg::multiply(forms_.damping, state.v);
  for (std::size_t i = 0; i < force.size(); ++i) force[i] = -force[i] - rho_ * damp[i];
  return {state.v, mass_factor_->solve(force)};
}

Matrix FirstOrderSystem::generator_matrix() const {
  const std::size_t n = n_dof();
  const Matrix mk = mass_factor_->solve(forms_.bending);
  const Matrix md = mass_factor_->solve(forms_.damping);
  Matrix a(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, n + i) = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      a(n + i, j) = -mk(i, j);
      a(n + i, n + j) = -rho_ * md(i, j);
    }
  }
  return a;
}

FirstOrderSystem make_system(const DomainConfig& config) {
  const Mesh1D mesh = build_mesh(config);
  return FirstOrderSystem(fem::assemble(fem::build_space(mesh)), config.rho);
}

StateVector apply_generator(const FirstOrderSystem& sys, const StateVector& state) { return sys.apply(state); }

double dissipation_form(const FirstOrderSystem& sys, const StateVector& state) {
  return sys.gram().inner(sys.apply(state), state);
}

SolveResult lax_milgram_solve_shifted(const FirstOrderSystem& sys, const StateVector& rhs) {
  check_size(rhs, sys.n_dof());
  const auto& forms = sys.forms();
  Vector load = linalg::multiply(forms.mass, axpy(rhs.v, 1.0, rhs.u));
  const Vector damp = linalg::multiply(forms.damping, rhs.u);
  for (std::size_t i = 0; i < load.size(); ++i) load[i] += sys.rho() * damp[i];

  SolveResult out;
  out.state.u = sys.shifted_factor().solve(load);
  out.state.v = axpy(out.state.u, -1.0, rhs.u);

  // (1 - A) U - F
  const StateVector image = difference(out.state, sys.apply(out.state));
  out.residual = relative(sys.gram().norm(difference(image, rhs)), sys.gram().norm(rhs));
  return out;
}

SolveResult solve_inverse(const FirstOrderSystem& sys, const StateVector& rhs) {
  check_size(rhs, sys.n_dof());
  const auto& forms = sys.forms();
  Vector load = linalg::multiply(forms.mass, rhs.v);
  const Vector damp = linalg::multiply(forms.damping, rhs.u);
  for (std::size_t i = 0; i < load.size(); ++i) load[i] += sys.rho() * damp[i];

  SolveResult out;
  out.state.u = sys.bending_factor().solve(load);
  out.state.v = axpy(Vector(rhs.u.size(), 0.0), -1.0, rhs.u);

  StateVector image = sys.apply(out.state);
  for (double& x : image.u) x = -x;
  for (double& x : image.v) x = -x;
  out.residual = relative(sys.gram().norm(difference(image, rhs)), sys.gram().norm(rhs));
  return out;
}

}  // namespace platelab::op
