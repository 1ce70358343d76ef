#include "platelab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "platelab/bench.hpp"
#include "platelab/errors.hpp"
#include "platelab/fem.hpp"

namespace platelab::cli {

namespace fs = std::filesystem;

namespace {

class IoError : public Error {
public:
  using Error::Error;
};

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  body(out);
  if (!out) throw IoError("write failed for " + path.string());
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

// Runs a command body and maps exceptions onto exit codes.
int guarded(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const GeometryError& e) {
    log << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ParameterError& e) {
    log << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const IoError& e) {
    log << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    log << "numerical failure: " << e.what() << '\n';
    return kCheckFailed;
  }
}

Check make_check(std::string name, std::string claim, double measured, double tolerance, bool passed,
                 std::string note = {}) {
  Check c;
  c.name = std::move(name);
  c.claim = std::move(claim);
  c.measured = measured;
  c.tolerance = tolerance;
  c.passed = passed;
  c.note = std::move(note);
  return c;
}

Check not_applicable(std::string name, std::string claim, std::string note) {
  Check c;
  c.name = std::move(name);
  c.claim = std::move(claim);
  c.applicable = false;
  c.passed = true;
  c.note = std::move(note);
  return c;
}

bool has_damping(const op::FirstOrderSystem& sys) {
  if (sys.rho() == 0.0) return false;
  for (double v : sys.forms().damping.data())
    if (v != 0.0) return true;
  return false;
}

int finish(const RunReport& report, const fs::path& out_dir, const std::string& file, std::ostream& log) {
  RunReport final_report = report;
  final_report.artifacts.push_back(file);
  const std::string text = final_report.render();
  write_file(out_dir / file, [&](std::ostream& os) { os << text; });
  log << text;
  return final_report.passed() ? kOk : kCheckFailed;
}

}  // namespace

// ---- report ---------------------------------------------------------------

bool RunReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return !c.applicable || c.passed; });
}

std::string RunReport::render() const {
  std::ostringstream os;
  os << "platelab " << command << " report\n";
  os << "\n[config]\n" << config_echo;
  os << "\n[checks]\n";
  for (const Check& c : checks) {
    const char* status = !c.applicable ? "N/A " : (c.passed ? "PASS" : "FAIL");
    os << status << "  " << c.name << "  {" << c.claim << "}";
    if (c.applicable) os << "  measured=" << format_double(c.measured) << "  tolerance=" << format_double(c.tolerance);
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << '\n';
  }
  os << "\n[artifacts]\n";
  for (const std::string& a : artifacts) os << a << '\n';
  os << "\noverall: " << (passed() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_energy_csv(std::ostream& out, const evolve::EnergyTrace& trace) {
  out << "t,E,dissipation_residual\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double r = i == 0 ? 0.0 : trace.dissipation_residuals[i - 1];
    out << format_double(trace.times[i]) << ',' << format_double(trace.energies[i]) << ',' << format_double(r)
        << '\n';
  }
}

void write_spectrum_csv(std::ostream& out, const spectral::SpectrumResult& spectrum) {
  out << "re,im,residual\n";
  for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
    const double r = i < spectrum.residuals.size() ? spectrum.residuals[i] : std::nan("");
    out << format_double(spectrum.eigenvalues[i].real()) << ',' << format_double(spectrum.eigenvalues[i].imag())
        << ',' << format_double(r) << '\n';
  }
}

void write_scan_csv(std::ostream& out, const spectral::ResolventScan& scan) {
  out << "lambda,resolvent_norm\n";
  for (std::size_t i = 0; i < scan.lambdas.size(); ++i) {
    out << format_double(scan.lambdas[i]) << ',' << format_double(scan.norms[i]) << '\n';
  }
}

void write_matrix_csv(std::ostream& out, const linalg::Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

// ---- commands ---------------------------------------------------------------

int cmd_simulate(const SimulateOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    if (options.dt && !(*options.dt > 0.0 && std::isfinite(*options.dt))) {
      throw ParameterError("--dt must be positive");
    }
    if (options.steps && *options.steps == 0) throw ParameterError("--steps must be at least 1");
    const DomainConfig config = read_config(options.config);
    prepare_out_dir(options.out);

    const fem::HermiteSpace space = fem::build_space(build_mesh(config));
    const op::FirstOrderSystem sys(fem::assemble(space), config.rho);
    const double dt = options.dt.value_or(evolve::default_time_step(sys));
    const std::size_t steps = options.steps.value_or(evolve::kDefaultSteps);
    const op::StateVector initial = evolve::initial_state(space, sys, config, options.init);
    const evolve::EnergyTrace trace = evolve::simulate(sys, initial, dt, steps);

    RunReport report;
    report.command = "simulate";
    report.config_echo = format_config(config) +
                         "dt = " + format_double(dt) + "\nsteps = " + std::to_string(steps) +
                         "\ninit = " + (options.init == evolve::InitialData::Bump ? "bump" : "random") + "\n";

    write_file(options.out / "energy.csv", [&](std::ostream& os) { write_energy_csv(os, trace); });
    report.artifacts.push_back("energy.csv");
    write_file(options.out / "energy_summary.txt", [&](std::ostream& os) {
      os << "kappa_fit = " << format_double(trace.kappa_fit) << ", fit_r2 = " << format_double(trace.fit_r2)
         << ", window = [" << format_double(trace.fit_window.t1) << ", " << format_double(trace.fit_window.t2)
         << "]\n";
    });
    report.artifacts.push_back("energy_summary.txt");

    const double e0 = trace.energies.front();
    const double denom = e0 > 0.0 ? e0 : 1.0;
    const double balance = trace.max_dissipation_residual() / denom;
    report.checks.push_back(make_check("energy_balance", "midpoint energy identity E' = -rho |grad v|^2 on the damped part",
                                       balance, 1e-11, balance <= 1e-11));
    double worst_increase = 0.0;
    for (std::size_t i = 1; i < trace.energies.size(); ++i) {
      worst_increase = std::max(worst_increase, (trace.energies[i] - trace.energies[i - 1]) / denom);
    }
    report.checks.push_back(make_check("energy_nonincreasing", "contraction semigroup: energy never grows",
                                       worst_increase, 1e-11, worst_increase <= 1e-11));

    const double drift = std::abs(trace.energies.back() - e0) / denom;
    if (!has_damping(sys)) {
      report.checks.push_back(
          make_check("energy_conservation", "undamped flow conserves energy", drift, 1e-10, drift <= 1e-10));
      report.checks.push_back(not_applicable("energy_decay", "exponential decay of energy", "no damping"));
      report.checks.push_back(not_applicable("decay_rate_vs_spectrum", "decay rate equals twice the spectral abscissa",
                                             "no damping"));
    } else {
      report.checks.push_back(not_applicable("energy_conservation", "undamped flow conserves energy", "rho > 0"));
      const double ratio = trace.energies.back() / denom;
      report.checks.push_back(make_check("energy_decay", "exponential decay of energy", ratio, 1.0, ratio < 1.0,
                                         "E(T)/E(0)"));
      const spectral::SpectrumResult spec = spectral::spectrum(sys, false);
      const double target = 2.0 * std::abs(spec.spectral_abscissa);
      const double mismatch = std::abs(trace.kappa_fit - target) / target;
      report.checks.push_back(make_check("decay_rate_vs_spectrum", "decay rate equals twice the spectral abscissa",
                                         mismatch, 0.15, mismatch <= 0.15,
                                         "kappa_fit=" + format_double(trace.kappa_fit) +
                                             " 2|abscissa|=" + format_double(target)));
    }
    return finish(report, options.out, "simulate_report.txt", log);
  });
}

int cmd_spectrum(const SpectrumOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    const DomainConfig config = read_config(options.config);
    prepare_out_dir(options.out);
    const fem::HermiteSpace space = fem::build_space(build_mesh(config));
    const op::FirstOrderSystem sys(fem::assemble(space), config.rho);
    const spectral::SpectrumResult spec = spectral::spectrum(sys);

    RunReport report;
    report.command = "spectrum";
    report.config_echo = format_config(config);
    write_file(options.out / "spectrum.csv", [&](std::ostream& os) { write_spectrum_csv(os, spec); });
    report.artifacts.push_back("spectrum.csv");
    write_file(options.out / "spectrum_summary.txt", [&](std::ostream& os) {
      os << "eigenvalues = " << spec.eigenvalues.size() << '\n'
         << "spectral_abscissa = " << format_double(spec.spectral_abscissa) << '\n'
         << "imag_axis_margin = " << format_double(spec.imag_axis_margin) << '\n'
         << "zero_margin = " << format_double(spec.zero_margin) << '\n'
         << "residual_bound = " << format_double(spec.residual_bound) << '\n';
    });
    report.artifacts.push_back("spectrum_summary.txt");

    report.checks.push_back(make_check("zero_in_resolvent_set", "A has a bounded inverse (0 is not an eigenvalue)", spec.zero_margin,
                                       0.0, spec.zero_margin > 0.0, "min |lambda|"));
    report.checks.push_back(make_check("eigenpair_residuals", "computed pairs solve the quadratic pencil",
                                       spec.residual_bound, 1e-8, spec.residual_bound <= 1e-8));
    if (has_damping(sys)) {
      report.checks.push_back(make_check("spectral_abscissa_negative", "spectrum in the open left half-plane",
                                         spec.spectral_abscissa, 0.0, spec.spectral_abscissa < 0.0));
      report.checks.push_back(make_check("imaginary_axis_free", "no eigenvalue on the imaginary axis",
                                         spec.imag_axis_margin, 0.0, spec.imag_axis_margin > 0.0));
      if (config.layout == Layout::Transmission) {
        const auto fractions = spectral::damped_fractions(spec, sys.forms().mass,
                                                          fem::assemble_region_mass(space, Region::Damped));
        const double least = *std::min_element(fractions.begin(), fractions.end());
        report.checks.push_back(make_check("no_undamped_ghost_modes",
                                           "no eigenfunction lives only in the undamped part", least, 1e-12,
                                           least > 1e-12, "min damped mass fraction over modes"));
      }
    } else {
      report.checks.push_back(not_applicable("spectral_abscissa_negative", "spectrum in the open left half-plane",
                                             "no damping: abscissa = " + format_double(spec.spectral_abscissa)));
      report.checks.push_back(not_applicable("imaginary_axis_free", "no eigenvalue on the imaginary axis",
                                             "no damping: spectrum on the imaginary axis"));
    }
    return finish(report, options.out, "spectrum_report.txt", log);
  });
}

int cmd_scan(const ScanOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    if (options.points == 0) throw ParameterError("--points must be at least 1");
    if (!(options.lambda_min <= options.lambda_max)) throw ParameterError("--lmin must not exceed --lmax");
    const DomainConfig config = read_config(options.config);
    prepare_out_dir(options.out);
    const op::FirstOrderSystem sys = op::make_system(config);
    const spectral::Grid grid{options.lambda_min, options.lambda_max, options.points};
    const spectral::ResolventScan scan = spectral::scan_imaginary_axis(sys, grid, {.workers = options.workers});

    RunReport report;
    report.command = "scan";
    report.config_echo = format_config(config) + "lmin = " + format_double(grid.lambda_min) +
                         "\nlmax = " + format_double(grid.lambda_max) + "\npoints = " + std::to_string(grid.count) +
                         "\n";
    write_file(options.out / "scan.csv", [&](std::ostream& os) { write_scan_csv(os, scan); });
    report.artifacts.push_back("scan.csv");
    write_file(options.out / "scan_summary.txt", [&](std::ostream& os) {
      os << "sup_norm = " << format_double(scan.sup_norm) << '\n'
         << "flagged = " << (scan.flagged ? "yes" : "no") << '\n'
         << "all_converged = " << (scan.all_converged ? "yes" : "no") << '\n';
      for (const auto& p : scan.peaks) {
        os << "peak lambda = " << format_double(p.lambda) << " norm = " << format_double(p.norm)
           << (p.singular ? " singular" : "") << '\n';
      }
      for (double s : scan.singular_points) os << "singular near lambda = " << format_double(s) << '\n';
    });
    report.artifacts.push_back("scan_summary.txt");
    report.checks.push_back(make_check("resolvent_bounded_on_axis", "uniform resolvent bound on the imaginary axis",
                                       scan.sup_norm, spectral::kNormCap, !scan.flagged,
                                       std::to_string(scan.singular_points.size()) + " singular points"));
    return finish(report, options.out, "scan_report.txt", log);
  });
}

int cmd_verify(const VerifyOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    const DomainConfig config = read_config(options.config);
    prepare_out_dir(options.out);
    RunReport report;
    report.command = "verify";
    report.config_echo = format_config(config);
    for (Check& c : identity_checks(config.seed)) report.checks.push_back(std::move(c));
    for (Check& c : operator_checks(config)) report.checks.push_back(std::move(c));
    write_file(options.out / "verify_checks.csv", [&](std::ostream& os) {
      os << "name,status,measured,tolerance\n";
      for (const Check& c : report.checks) {
        os << c.name << ',' << (!c.applicable ? "n/a" : (c.passed ? "pass" : "fail")) << ','
           << format_double(c.measured) << ',' << format_double(c.tolerance) << '\n';
      }
    });
    report.artifacts.push_back("verify_checks.csv");
    return finish(report, options.out, "verify_report.txt", log);
  });
}

int cmd_export(const ExportOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    const DomainConfig config = read_config(options.config);
    prepare_out_dir(options.out);
    const auto forms = fem::assemble(fem::build_space(build_mesh(config)));
    const std::pair<const char*, const linalg::Matrix*> files[] = {
        {"M.csv", &forms.mass}, {"K.csv", &forms.bending}, {"D0.csv", &forms.damping}};
    for (const auto& [name, matrix] : files) {
      write_file(options.out / name, [&](std::ostream& os) { write_matrix_csv(os, *matrix); });
      log << "wrote " << (options.out / name).string() << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int cmd_bench(const BenchOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    const auto records = bench::run_bench(options.sizes, options.reps);
    prepare_out_dir(options.out);
    write_file(options.out / "bench.csv", [&](std::ostream& os) { bench::write_csv(os, records); });
    bench::write_csv(log, records);
    for (const auto& r : records) {
      if (r.non_monotone) log << "note: " << r.kernel << " median time decreased at n = " << r.n << '\n';
    }
    return static_cast<int>(kOk);
  });
}

// ---- argument parsing --------------------------------------------------------

int run(int argc, char** argv, std::ostream& log, std::ostream& err) {
  CLI::App app{"platelab: damped/undamped plate transmission problem laboratory"};
  app.require_subcommand(1);

  SimulateOptions sim;
  std::string init = "bump";
  auto* simulate = app.add_subcommand("simulate", "Implicit midpoint run with energy ledger and decay fit");
  simulate->add_option("config", sim.config, "Configuration file")->required();
  simulate->add_option("--dt", sim.dt, "Time step (default: 1e-3 of the fundamental period)");
  simulate->add_option("--steps", sim.steps, "Number of steps (default 20000)");
  simulate->add_option("--init", init, "Initial data")->check(CLI::IsMember({"bump", "random"}));
  simulate->add_option("--out", sim.out, "Output directory");

  SpectrumOptions spec;
  auto* spectrum = app.add_subcommand("spectrum", "Generator eigenvalues and spectral margins");
  spectrum->add_option("config", spec.config, "Configuration file")->required();
  spectrum->add_option("--out", spec.out, "Output directory");

  ScanOptions scan;
  auto* scan_cmd = app.add_subcommand("scan", "Resolvent norm along the imaginary axis");
  scan_cmd->add_option("config", scan.config, "Configuration file")->required();
  scan_cmd->add_option("--lmin", scan.lambda_min, "Smallest lambda");
  scan_cmd->add_option("--lmax", scan.lambda_max, "Largest lambda");
  scan_cmd->add_option("--points", scan.points, "Number of grid points");
  scan_cmd->add_option("--workers", scan.workers, "Worker threads (results are identical for any count)");
  scan_cmd->add_option("--out", scan.out, "Output directory");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Identity and operator property suite");
  verify_cmd->add_option("config", verify.config, "Configuration file")->required();
  verify_cmd->add_option("--out", verify.out, "Output directory");

  ExportOptions exp;
  auto* export_cmd = app.add_subcommand("export", "Write M, K and D0 as dense CSV");
  export_cmd->add_option("config", exp.config, "Configuration file")->required();
  export_cmd->add_option("--out", exp.out, "Output directory");

  BenchOptions bench_opts;
  auto* bench_cmd = app.add_subcommand("bench", "Time the dense kernels");
  bench_cmd->add_option("--sizes", bench_opts.sizes, "Matrix sizes, ascending")->delimiter(',');
  bench_cmd->add_option("--reps", bench_opts.reps, "Timed repetitions (>= 3)");
  bench_cmd->add_option("--out", bench_opts.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, log, err);
    return code == 0 ? kOk : kUsageError;
  }

  if (*simulate) {
    sim.init = init == "random" ? evolve::InitialData::Random : evolve::InitialData::Bump;
    return cmd_simulate(sim, log);
  }
  if (*spectrum) return cmd_spectrum(spec, log);
  if (*scan_cmd) return cmd_scan(scan, log);
  if (*verify_cmd) return cmd_verify(verify, log);
  if (*export_cmd) return cmd_export(exp, log);
  if (*bench_cmd) return cmd_bench(bench_opts, log);
  return kUsageError;
}

}  // namespace platelab::cli
