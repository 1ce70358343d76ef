#pragma once

// Implicit midpoint time stepping of the first-order system. For this
// linear system the scheme satisfies the discrete energy balance
//
//   E^{n+1} - E^n = -dt rho (v^{n+1/2})^T D0 v^{n+1/2}
//
// exactly, so the per-step residual of that identity is pure roundoff.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "platelab/domain.hpp"
#include "platelab/fem.hpp"
#include "platelab/operator.hpp"

namespace platelab::evolve {

using linalg::Vector;
using op::StateVector;

struct StepResult {
  StateVector next;
  Vector v_half;
};

/// Caches the factorization of M + dt^2/4 K + dt/2 rho D0 for one step size.
/// Negative dt integrates backwards (valid as long as the matrix stays
/// positive definite, e.g. for rho = 0).
class MidpointStepper {
public:
  MidpointStepper(const op::FirstOrderSystem& sys, double dt);

  [[nodiscard]] double dt() const noexcept { return dt_; }
  [[nodiscard]] StepResult step(const StateVector& state) const;

private:
  const op::FirstOrderSystem* sys_;
  double dt_;
  std::shared_ptr<const linalg::Cholesky> factor_;
};

/// One step with dt > 0.
StateVector step_midpoint(const op::FirstOrderSystem& sys, const StateVector& state, double dt);

struct TimeWindow {
  double t1 = 0.0;
  double t2 = 0.0;
};

struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energies;
  /// |E^{n+1} - E^n + dt rho v_half^T D0 v_half| per step (size = steps).
  std::vector<double> dissipation_residuals;
  double kappa_fit = 0.0;
  double fit_r2 = 0.0;
  TimeWindow fit_window;

  [[nodiscard]] double max_dissipation_residual() const;
};

/// Runs n_steps of size dt from `initial` and fits the decay rate on the
/// last half of the trace (when the energy there is positive).
EnergyTrace simulate(const op::FirstOrderSystem& sys, const StateVector& initial, double dt, std::size_t n_steps);

struct DecayFit {
  double kappa = 0.0;
  double r2 = 0.0;
  std::size_t samples = 0;
};

/// Least-squares slope of log E(t) over the window; kappa = -slope.
DecayFit fit_decay(const EnergyTrace& trace, const TimeWindow& window);
TimeWindow late_window(const EnergyTrace& trace);

/// Smallest omega with K x = omega^2 M x.
double fundamental_frequency(const op::FirstOrderSystem& sys);

/// 1e-3 of the fundamental period 2 pi / omega_1.
double default_time_step(const op::FirstOrderSystem& sys);
inline constexpr std::size_t kDefaultSteps = 20000;

enum class InitialData { Bump, Random };

/// Smooth bump supported in [a,b] with zero velocity, or a random state of
/// unit energy norm (seeded).
StateVector initial_state(const fem::HermiteSpace& space, const op::FirstOrderSystem& sys,
                          const DomainConfig& config, InitialData kind);

}  // namespace platelab::evolve
