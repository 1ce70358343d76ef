#include "platelab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "platelab/errors.hpp"

namespace platelab::evolve {

MidpointStepper::MidpointStepper(const op::FirstOrderSystem& sys, double dt) : sys_(&sys), dt_(dt) {
  if (!std::isfinite(dt) || dt == 0.0) throw ParameterError("evolve: time step must be finite and nonzero");
  const auto& forms = sys.forms();
  linalg::Matrix s = linalg::add(forms.mass, forms.bending, 0.25 * dt * dt);
  s = linalg::add(s, forms.damping, 0.5 * dt * sys.rho());
  try {
    factor_ = std::make_shared<const linalg::Cholesky>(s);
  } catch (const NotPositiveDefinite&) {
    throw SingularMatrix("evolve: midpoint system matrix is not positive definite");
  }
}

StepResult MidpointStepper::step(const StateVector& state) const {
  const auto& forms = sys_->forms();
  const std::size_t n = sys_->n_dof();
  if (state.u.size() != n || state.v.size() != n) throw DimensionMismatch("evolve: state dimension");
  Vector rhs = linalg::multiply(forms.mass, state.v);
  const Vector ku = linalg::multiply(forms.bending, state.u);
  for (std::size_t i = 0; i < n; ++i) rhs[i] -= 0.5 * dt_ * ku[i];

  StepResult out;
  out.v_half = factor_->solve(rhs);
  out.next.u.resize(n);
  out.next.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.next.u[i] = state.u[i] + dt_ * out.v_half[i];
    out.next.v[i] = 2.0 * out.v_half[i] - state.v[i];
  }
  return out;
}

StateVector step_midpoint(const op::FirstOrderSystem& sys, const StateVector& state, double dt) {
  if (!(dt > 0.0)) throw ParameterError("evolve: time step must be positive");
  return MidpointStepper(sys, dt).step(state).next;
}

double EnergyTrace::max_dissipation_residual() const {
  double worst = 0.0;
  for (double r : dissipation_residuals) worst = std::max(worst, r);
  return worst;
}

TimeWindow late_window(const EnergyTrace& trace) {
  if (trace.times.empty()) throw WindowError("evolve: empty trace");
  return {trace.times.front() + 0.5 * (trace.times.back() - trace.times.front()), trace.times.back()};
}

EnergyTrace simulate(const op::FirstOrderSystem& sys, const StateVector& initial, double dt, std::size_t n_steps) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("evolve: time step must be positive");
  if (n_steps < 1) throw ParameterError("evolve: at least one step required");
  const MidpointStepper stepper(sys, dt);
  const auto& gram = sys.gram();

  EnergyTrace trace;
  trace.times.reserve(n_steps + 1);
  trace.energies.reserve(n_steps + 1);
  trace.dissipation_residuals.reserve(n_steps);

  StateVector state = initial;
  double e = op::energy(gram, state);
  trace.times.push_back(0.0);
  trace.energies.push_back(e);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    StepResult r = stepper.step(state);
    const double e_next = op::energy(gram, r.next);
    const double loss = dt * sys.rho() * linalg::quadratic_form(sys.forms().damping, r.v_half, r.v_half);
    trace.dissipation_residuals.push_back(std::abs(e_next - e + loss));
    trace.times.push_back(dt * static_cast<double>(k));
    trace.energies.push_back(e_next);
    state = std::move(r.next);
    e = e_next;
  }

  trace.fit_window = late_window(trace);
  try {
    const DecayFit fit = fit_decay(trace, trace.fit_window);
    trace.kappa_fit = fit.kappa;
    trace.fit_r2 = fit.r2;
  } catch (const NonpositiveEnergy&) {
    trace.kappa_fit = 0.0;
    trace.fit_r2 = 0.0;
  }
  return trace;
}

DecayFit fit_decay(const EnergyTrace& trace, const TimeWindow& window) {
  if (!(window.t2 > window.t1)) throw WindowError("evolve: degenerate fit window");
  double st = 0.0;
  double sy = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    if (t < window.t1 || t > window.t2) continue;
    if (!(trace.energies[i] > 0.0)) throw NonpositiveEnergy("evolve: energy must be positive on the fit window");
    st += t;
    sy += std::log(trace.energies[i]);
    ++count;
  }
  if (count < 2) throw WindowError("evolve: fit window holds fewer than two samples");
  const double mt = st / static_cast<double>(count);
  const double my = sy / static_cast<double>(count);
  double stt = 0.0;
  double sty = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    if (t < window.t1 || t > window.t2) continue;
    const double dt = t - mt;
    const double dy = std::log(trace.energies[i]) - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  if (stt == 0.0) throw WindowError("evolve: fit window has no time extent");
  const double slope = sty / stt;
  DecayFit fit;
  fit.kappa = -slope;
  fit.samples = count;
  const double ss_res = std::max(0.0, syy - slope * sty);
  fit.r2 = syy > 1e-300 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

double fundamental_frequency(const op::FirstOrderSystem& sys) {
  // Inverse iteration with K^{-1} M; the spectral gap of the clamped pencil
  // makes a fixed, generous iteration count sufficient.
  const auto& forms = sys.forms();
  const std::size_t n = sys.n_dof();
  Vector x(n, 1.0);
  double omega2 = 0.0;
  for (int it = 0; it < 200; ++it) {
    const Vector mx = linalg::multiply(forms.mass, x);
    Vector y = sys.bending_factor().solve(mx);
    const double yky = linalg::quadratic_form(forms.bending, y, y);
    const double ymy = linalg::quadratic_form(forms.mass, y, y);
    const double next = yky / ymy;
    const double scale = std::sqrt(ymy);
    for (double& v : y) v /= scale;
    x = std::move(y);
    if (it > 0 && std::abs(next - omega2) <= 1e-15 * next) {
      omega2 = next;
      break;
    }
    omega2 = next;
  }
  return std::sqrt(omega2);
}

double default_time_step(const op::FirstOrderSystem& sys) {
  return 1e-3 * 2.0 * std::numbers::pi / fundamental_frequency(sys);
}

StateVector initial_state(const fem::HermiteSpace& space, const op::FirstOrderSystem& sys,
                          const DomainConfig& config, InitialData kind) {
  const std::size_t n = sys.n_dof();
  if (kind == InitialData::Bump) {
    const double a = config.interface_a;
    const double b = config.interface_b;
    const double half = 0.5 * (b - a);
    const double norm = std::pow(half, 4);
    auto f = [=](double x) { return x <= a || x >= b ? 0.0 : std::pow((x - a) * (b - x), 2) / norm; };
    auto df = [=](double x) {
      return x <= a || x >= b ? 0.0 : 2.0 * (x - a) * (b - x) * ((b - x) - (x - a)) / norm;
    };
    return {fem::interpolate(space, f, df), Vector(n, 0.0)};
  }
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  StateVector s = StateVector::zero(n);
  for (double& v : s.u) v = normal(rng);
  for (double& v : s.v) v = normal(rng);
  const double g = sys.gram().norm(s);
  for (double& v : s.u) v /= g;
  for (double& v : s.v) v /= g;
  return s;
}

}  // namespace platelab::evolve
