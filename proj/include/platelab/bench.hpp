#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace platelab::bench {

struct BenchRecord {
  std::string kernel;
  std::size_t n = 0;
  int reps = 0;
  double median_s = 0.0;
  double min_s = 0.0;
  double checksum = 0.0;
  /// Median time dropped below the previous size for the same kernel.
  bool non_monotone = false;
};

inline const std::vector<std::string> kKernels{"lu", "eig", "gsv"};

/// Deterministic result digest of one kernel run on seeded inputs of size n.
double kernel_checksum(const std::string& kernel, std::size_t n, std::uint64_t seed = 42);

/// Times every kernel at every size: one discarded warm-up run, then `reps`
/// timed runs. Sizes must be non-empty and strictly ascending, reps >= 3.
std::vector<BenchRecord> run_bench(const std::vector<std::size_t>& sizes, int reps, std::uint64_t seed = 42);

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);

}  // namespace platelab::bench
