#include "platelab/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "platelab/errors.hpp"
#include "platelab/linalg.hpp"

namespace platelab::bench {

namespace {

using linalg::Complex;
using linalg::Matrix;

Matrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(n, n);
  for (double& v : a.data()) v = u(rng);
  return a;
}

// Diagonally shifted so the LU and gsv inputs are comfortably nonsingular.
Matrix shifted_random(std::size_t n, std::mt19937_64& rng) {
  Matrix a = random_matrix(n, rng);
  for (std::size_t i = 0; i < n; ++i) a(i, i) += static_cast<double>(n);
  return a;
}

double run_kernel(const std::string& kernel, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed + n);
  if (kernel == "lu") {
    const Matrix a = shifted_random(n, rng);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix b(n, 1);
    for (double& v : b.data()) v = u(rng);
    const Matrix x = linalg::lu_solve(a, b);
    double s = 0.0;
    for (double v : x.data()) s += v;
    return s;
  }
  if (kernel == "eig") {
    const Matrix a = random_matrix(n, rng);
    const auto r = linalg::eig_general(a, {.vectors = false});
    double s = 0.0;
    for (const Complex& l : r.eigenvalues) s += std::abs(l);
    return s;
  }
  if (kernel == "gsv") {
    const Matrix a = shifted_random(n, rng);
    const Matrix b = random_matrix(n, rng);
    linalg::CMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c(i, j) = {a(i, j), b(i, j)};
    Matrix g = multiply(transpose(b), b);
    for (std::size_t i = 0; i < n; ++i) g(i, i) += 1.0;
    return linalg::smallest_gsv(c, g, {.seed = seed});
  }
  throw ParameterError("bench: unknown kernel '" + kernel + "'");
}

}  // namespace

double kernel_checksum(const std::string& kernel, std::size_t n, std::uint64_t seed) {
  return run_kernel(kernel, n, seed);
}

std::vector<BenchRecord> run_bench(const std::vector<std::size_t>& sizes, int reps, std::uint64_t seed) {
  if (sizes.empty()) throw ParameterError("bench: at least one size required");
  if (reps < 3) throw ParameterError("bench: at least three repetitions required");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0 || (i > 0 && sizes[i] <= sizes[i - 1])) {
      throw ParameterError("bench: sizes must be positive and strictly ascending");
    }
  }
  std::vector<BenchRecord> records;
  for (const std::string& kernel : kKernels) {
    double previous_median = 0.0;
    for (std::size_t n : sizes) {
      BenchRecord rec;
      rec.kernel = kernel;
      rec.n = n;
      rec.reps = reps;
      rec.checksum = run_kernel(kernel, n, seed);  // warm-up, discarded timing
      std::vector<double> times;
      for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        const double c = run_kernel(kernel, n, seed);
        const auto t1 = std::chrono::steady_clock::now();
        if (c != rec.checksum) throw Error("bench: kernel result changed between repetitions");
        times.push_back(std::chrono::duration<double>(t1 - t0).count());
      }
      std::sort(times.begin(), times.end());
      rec.min_s = times.front();
      rec.median_s = times[times.size() / 2];
      rec.non_monotone = rec.median_s < previous_median;
      previous_median = rec.median_s;
      records.push_back(rec);
    }
  }
  return records;
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "kernel,n,reps,median_s,min_s,checksum\n";
  char buf[64];
  for (const auto& r : records) {
    out << r.kernel << ',' << r.n << ',' << r.reps << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.median_s);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.min_s);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.checksum);
    out << buf << '\n';
  }
}

}  // namespace platelab::bench
