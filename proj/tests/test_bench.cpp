#include <gtest/gtest.h>

#include <sstream>

#include "platelab/bench.hpp"
#include "platelab/errors.hpp"

using namespace platelab;

TEST(Bench, OneRecordPerKernel) {
  const auto records = bench::run_bench({20}, 3);
  ASSERT_EQ(records.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(records[i].kernel, bench::kKernels[i]);
    EXPECT_EQ(records[i].n, 20u);
    EXPECT_EQ(records[i].reps, 3);
    EXPECT_LE(records[i].min_s, records[i].median_s);
    EXPECT_GT(records[i].min_s, 0.0);
  }
}

TEST(Bench, UsageErrors) {
  EXPECT_THROW(bench::run_bench({}, 3), ParameterError);
  EXPECT_THROW(bench::run_bench({20, 10}, 3), ParameterError);
  EXPECT_THROW(bench::run_bench({20}, 2), ParameterError);
}

TEST(Bench, ChecksumsMatchUnbenchmarkedRuns) {
  const auto records = bench::run_bench({10, 30}, 3);
  for (const auto& r : records) EXPECT_EQ(r.checksum, bench::kernel_checksum(r.kernel, r.n));
}

TEST(Bench, CsvLayout) {
  std::ostringstream out;
  bench::write_csv(out, bench::run_bench({10}, 3));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "kernel,n,reps,median_s,min_s,checksum");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}
