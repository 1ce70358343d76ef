#pragma once

// Command-line front end. Every command returns an exit code:
//   0  success, all checks passed
//   1  usage, configuration or I/O error
//   2  a scientific check failed

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "platelab/evolve.hpp"
#include "platelab/spectral.hpp"

namespace platelab::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kCheckFailed = 2 };

struct Check {
  std::string name;
  /// The mathematical claim the check witnesses.
  std::string claim;
  bool applicable = true;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct RunReport {
  std::string command;
  std::string config_echo;
  std::vector<Check> checks;
  std::vector<std::string> artifacts;

  /// Conjunction over applicable checks.
  [[nodiscard]] bool passed() const;
  [[nodiscard]] std::string render() const;
};

/// "%.17g", with "inf"/"nan" spelled out.
std::string format_double(double v);

void write_energy_csv(std::ostream& out, const evolve::EnergyTrace& trace);
void write_spectrum_csv(std::ostream& out, const spectral::SpectrumResult& spectrum);
void write_scan_csv(std::ostream& out, const spectral::ResolventScan& scan);
void write_matrix_csv(std::ostream& out, const linalg::Matrix& m);

struct SimulateOptions {
  std::filesystem::path config;
  std::filesystem::path out = ".";
  std::optional<double> dt;
  std::optional<std::size_t> steps;
  evolve::InitialData init = evolve::InitialData::Bump;
};

struct SpectrumOptions {
  std::filesystem::path config;
  std::filesystem::path out = ".";
};

struct ScanOptions {
  std::filesystem::path config;
  std::filesystem::path out = ".";
  double lambda_min = -200.0;
  double lambda_max = 200.0;
  std::size_t points = 401;
  unsigned workers = 1;
};

struct VerifyOptions {
  std::filesystem::path config;
  std::filesystem::path out = ".";
};

struct ExportOptions {
  std::filesystem::path config;
  std::filesystem::path out = ".";
};

struct BenchOptions {
  std::vector<std::size_t> sizes{50, 100, 200};
  int reps = 3;
  std::filesystem::path out = ".";
};

int cmd_simulate(const SimulateOptions& options, std::ostream& log);
int cmd_spectrum(const SpectrumOptions& options, std::ostream& log);
int cmd_scan(const ScanOptions& options, std::ostream& log);
int cmd_verify(const VerifyOptions& options, std::ostream& log);
int cmd_export(const ExportOptions& options, std::ostream& log);
int cmd_bench(const BenchOptions& options, std::ostream& log);

/// Checks run by `verify`: multiplier identities plus operator properties
/// (dissipativity, Lax-Milgram and inverse round trips, conformity).
std::vector<Check> identity_checks(std::uint64_t seed);
std::vector<Check> operator_checks(const DomainConfig& config);

/// Parses argv and dispatches to a subcommand.
int run(int argc, char** argv, std::ostream& log, std::ostream& err);

}  // namespace platelab::cli
