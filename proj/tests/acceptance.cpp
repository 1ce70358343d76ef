// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "oracles.hpp"
#include "platelab/cli.hpp"
#include "platelab/evolve.hpp"
#include "platelab/identities.hpp"
#include "platelab/spectral.hpp"

using namespace platelab;
using linalg::Complex;
using op::StateVector;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

DomainConfig default_config(double rho, Layout layout = Layout::Transmission) {
  DomainConfig c;
  c.rho = rho;
  c.layout = layout;
  return c;
}

StateVector random_state(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> normal;
  StateVector s = StateVector::zero(n);
  for (double& x : s.u) x = normal(rng);
  for (double& x : s.v) x = normal(rng);
  return s;
}

StateVector combine(const StateVector& a, double alpha, const StateVector& b) {
  StateVector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.u[i] += alpha * b.u[i];
    out.v[i] += alpha * b.v[i];
  }
  return out;
}

// 1. Lowest frequency of the clamped beam against mu_1^2, cos(mu) cosh(mu) = 1.
Outcome clamped_beam() {
  const auto start = std::chrono::steady_clock::now();
  const double mu = oracle::clamped_beam_mu1();
  const double exact = mu * mu;
  std::vector<double> errors;
  for (int elements : {8, 16, 32, 64}) {
    DomainConfig c = default_config(0.0, Layout::AllUndamped);
    c.interface_a = 0.25;
    c.interface_b = 0.75;
    c.elements_per_region = {elements / 4, elements / 2, elements / 4};
    const double omega = spectral::lowest_frequency(spectral::spectrum(op::make_system(c), false));
    errors.push_back(std::abs(omega - exact) / exact);
  }
  double order = INFINITY;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) order = std::min(order, std::log2(errors[i] / errors[i + 1]));
  const double elapsed = seconds_since(start);
  return {order >= 3.8 && errors.back() <= 1e-6 && elapsed < 10.0,
          fmt("min observed order %.3f (>= 3.8), final rel. error %.2e (<= 1e-6), %.2f s (< 10 s)", order,
              errors.back(), elapsed)};
}

// 2. Re<AU,U>_G = -rho v^T D0 v on random states.
Outcome dissipativity() {
  const DomainConfig c = default_config(1.0);
  const auto sys = op::make_system(c);
  std::mt19937_64 rng(c.seed);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const StateVector s = random_state(rng, sys.n_dof());
    // <AU, U>_G formed here from K, M and the generator action.
    const StateVector as = sys.apply(s);
    const double form = linalg::quadratic_form(sys.forms().bending, as.u, s.u) +
                        linalg::quadratic_form(sys.forms().mass, as.v, s.v);
    const double expected = -c.rho * linalg::quadratic_form(sys.forms().damping, s.v, s.v);
    worst = std::max(worst, std::abs(form - expected) / sys.gram().inner(s, s));
  }
  return {worst <= 1e-12, fmt("max |Re<AU,U>_G + rho v'D0v| / ||U||^2 = %.2e (<= 1e-12) over 100 states", worst)};
}

// 3. Discrete energy balance over 20000 midpoint steps, damped and undamped.
Outcome energy_balance() {
  double worst_ledger = 0.0;
  double drift = 0.0;
  for (double rho : {1.0, 0.0}) {
    const DomainConfig c = default_config(rho);
    const fem::HermiteSpace space = fem::build_space(build_mesh(c));
    const op::FirstOrderSystem sys(fem::assemble(space), rho);
    const auto u0 = evolve::initial_state(space, sys, c, evolve::InitialData::Random);
    const auto trace = evolve::simulate(sys, u0, evolve::default_time_step(sys), evolve::kDefaultSteps);
    const double e0 = trace.energies.front();
    worst_ledger = std::max(worst_ledger, trace.max_dissipation_residual() / e0);
    if (rho == 0.0) drift = std::abs(trace.energies.back() - e0) / e0;
  }
  return {worst_ledger <= 1e-11 && drift <= 1e-10,
          fmt("max per-step residual %.2e E(0) (<= 1e-11); rho = 0 drift %.2e E(0) (<= 1e-10)", worst_ledger, drift)};
}

// 4. Spectrum location for three damping levels on three meshes.
Outcome spectrum_location() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  double worst_abscissa = -INFINITY, min_margin = INFINITY, min_zero = INFINITY, worst_residual = 0.0;
  for (double rho : {0.1, 1.0, 10.0}) {
    for (int factor : {1, 2, 4}) {
      const auto sys = op::make_system(refined(default_config(rho), factor));
      const auto spec = spectral::spectrum(sys);
      // Pencil backward error recomputed from the returned modes.
      const auto& m = sys.forms().mass;
      const auto& k = sys.forms().bending;
      const auto& d = sys.forms().damping;
      const double nm = linalg::norm_inf(m), nk = linalg::norm_inf(k), nd = linalg::norm_inf(d);
      for (std::size_t j = 0; j < spec.eigenvalues.size(); ++j) {
        const Complex l = spec.eigenvalues[j];
        linalg::CVector u(sys.n_dof());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = (*spec.modes)(i, j);
        const auto mu = linalg::multiply(m, u), du = linalg::multiply(d, u), ku = linalg::multiply(k, u);
        double r = 0.0, un = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
          r = std::max(r, std::abs(l * l * mu[i] + l * rho * du[i] + ku[i]));
          un = std::max(un, std::abs(u[i]));
        }
        const double a = std::abs(l);
        worst_residual = std::max(worst_residual, r / ((nm * a * a + rho * nd * a + nk) * un));
      }
      worst_abscissa = std::max(worst_abscissa, spec.spectral_abscissa);
      min_margin = std::min(min_margin, spec.imag_axis_margin);
      min_zero = std::min(min_zero, spec.zero_margin);
      ok = ok && spec.spectral_abscissa < 0.0 && spec.imag_axis_margin > 0.0 && spec.zero_margin > 0.0 &&
           spec.residual_bound <= 1e-8;
    }
  }
  const double elapsed = seconds_since(start);
  ok = ok && worst_residual <= 1e-8 && elapsed < 60.0;
  return {ok, fmt("max abscissa %.4f (< 0), min imag margin %.4f (> 0), min |lambda| %.3f (> 0), "
                  "pencil residual %.2e (<= 1e-8), %.2f s (< 60 s)",
                  worst_abscissa, min_margin, min_zero, worst_residual, elapsed)};
}

// 5. Late-time decay rate against twice the spectral abscissa.
Outcome decay_rate() {
  const DomainConfig c = default_config(1.0);
  const fem::HermiteSpace space = fem::build_space(build_mesh(c));
  const op::FirstOrderSystem sys(fem::assemble(space), c.rho);
  const auto u0 = evolve::initial_state(space, sys, c, evolve::InitialData::Bump);
  const auto trace = evolve::simulate(sys, u0, evolve::default_time_step(sys), evolve::kDefaultSteps);
  const double target = 2.0 * std::abs(spectral::spectrum(sys, false).spectral_abscissa);
  const double mismatch = std::abs(trace.kappa_fit - target) / target;
  return {mismatch <= 0.15, fmt("kappa_fit %.5f vs 2|abscissa| %.5f, rel. difference %.2e (<= 0.15)",
                                trace.kappa_fit, target, mismatch)};
}

// 6. Resolvent along the imaginary axis: bounded and mesh-stable for rho = 1,
// flagged at the undamped eigenfrequencies for rho = 0.
Outcome resolvent_scan() {
  const spectral::Grid grid{};
  const auto coarse = spectral::scan_imaginary_axis(op::make_system(default_config(1.0)), grid);
  const auto fine = spectral::scan_imaginary_axis(op::make_system(refined(default_config(1.0), 2)), grid);
  bool finite = !coarse.flagged && !fine.flagged;
  for (double v : coarse.norms) finite = finite && std::isfinite(v);
  for (double v : fine.norms) finite = finite && std::isfinite(v);
  const double change = std::abs(fine.sup_norm - coarse.sup_norm) / coarse.sup_norm;

  const auto undamped = op::make_system(default_config(0.0));
  const auto spec = spectral::spectrum(undamped, false);
  const auto scan0 = spectral::scan_imaginary_axis(undamped, grid);
  std::size_t matched = 0, expected = 0;
  for (const Complex& l : spec.eigenvalues) {
    if (std::abs(l.imag()) > grid.lambda_max) continue;
    ++expected;
    for (double s : scan0.singular_points)
      if (std::abs(s - l.imag()) <= 1e-6 * std::abs(l.imag())) {
        ++matched;
        break;
      }
  }
  const bool flagged_ok = scan0.flagged && matched == expected && scan0.singular_points.size() == expected;
  return {finite && change <= 0.1 && flagged_ok,
          fmt("rho = 1: all 401 norms finite, sup %.6f -> %.6f under refinement (change %.2e <= 0.1); "
              "rho = 0: %zu of %zu eigenfrequencies flagged",
              coarse.sup_norm, fine.sup_norm, change, matched, expected)};
}

// 7. Multiplier identities on seeded random polynomials.
Outcome rellich() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& check : cli::identity_checks(42)) worst = std::max(worst, check.measured);
  const double elapsed = seconds_since(start);
  return {worst <= 1e-11 && elapsed < 5.0,
          fmt("worst relative residual %.2e (<= 1e-11) over 3 x 100 trials, %.3f s (< 5 s)", worst, elapsed)};
}

// 8. (1 - A) and -A inverted by the Lax-Milgram solves.
Outcome lax_milgram() {
  const auto sys = op::make_system(default_config(1.0));
  std::mt19937_64 rng(8);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const StateVector f = random_state(rng, sys.n_dof());
    const StateVector u = op::lax_milgram_solve_shifted(sys, f).state;
    const StateVector shifted = combine(combine(u, -1.0, sys.apply(u)), -1.0, f);
    const StateVector w = op::solve_inverse(sys, f).state;
    const StateVector inverse = combine(sys.apply(w), 1.0, f);
    const double fn = sys.gram().norm(f);
    worst = std::max({worst, sys.gram().norm(shifted) / fn, sys.gram().norm(inverse) / fn});
  }
  return {worst <= 1e-10, fmt("max relative G-norm residual %.2e (<= 1e-10) over 2 x 50 right-hand sides", worst)};
}

// 9. Whole-domain damping: stable, with |lambda| ||(i lambda - A)^{-1}|| bounded.
Outcome whole_domain() {
  const spectral::Grid grid{};
  const auto r1 = spectral::sector_check_whole_domain(default_config(1.0, Layout::AllDamped), 0.0, grid);
  const auto r2 = spectral::sector_check_whole_domain(refined(default_config(1.0, Layout::AllDamped), 2), 0.0, grid);
  const double change = std::abs(r2.sup_scaled_resolvent - r1.sup_scaled_resolvent) / r1.sup_scaled_resolvent;
  const bool ok = r1.spectral_abscissa < 0.0 && r2.spectral_abscissa < 0.0 && !r1.scan_flagged && !r2.scan_flagged &&
                  std::isfinite(r1.sup_scaled_resolvent) && std::isfinite(r2.sup_scaled_resolvent) && change <= 0.1;
  return {ok, fmt("abscissa %.4f (< 0), sup |lambda| ||R|| %.6f -> %.6f under refinement (change %.2e <= 0.1)",
                  r1.spectral_abscissa, r1.sup_scaled_resolvent, r2.sup_scaled_resolvent, change)};
}

// 10. Two verify runs give byte-identical artifacts.
Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("platelab_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "default.cfg";
  std::ofstream(cfg) << format_config(default_config(1.0));
  std::ostringstream log;
  const int rc1 = cli::cmd_verify({cfg, dir / "a"}, log);
  const int rc2 = cli::cmd_verify({cfg, dir / "b"}, log);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  bool same = true;
  std::size_t bytes = 0;
  for (const char* f : {"verify_report.txt", "verify_checks.csv"}) {
    const std::string a = slurp(dir / "a" / f);
    same = same && !a.empty() && a == slurp(dir / "b" / f);
    bytes += a.size();
  }
  fs::remove_all(dir);
  return {rc1 == 0 && rc2 == 0 && same,
          fmt("exit codes %d/%d, report and CSV identical: %s (%zu bytes)", rc1, rc2, same ? "yes" : "no", bytes)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"clamped-beam spectral oracle", clamped_beam},
      {"dissipativity identity", dissipativity},
      {"exact discrete energy balance", energy_balance},
      {"spectrum location", spectrum_location},
      {"exponential decay consistency", decay_rate},
      {"resolvent boundedness", resolvent_scan},
      {"multiplier identities", rellich},
      {"Lax-Milgram round trips", lax_milgram},
      {"whole-domain damped operator", whole_domain},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.passed;
    std::printf("[%s] %2zu %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
