#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "clogit/path.hpp"
#include "clogit/simulate.hpp"

namespace clogit {

struct BenchCell {
  std::string label;
  SimConfig sim;
  PathOptions path;
};

struct BenchRecord {
  std::string label;
  int K = 0, n = 0, m = 0, p = 0, reps = 0;
  double mean_time = 0.0;    // seconds, fit_path only
  double median_time = 0.0;
  double mean_max_strong = 0.0;  // largest strong-set size along the path
  double mean_violations = 0.0;  // pre-repair KKT violations summed over the path
  int path_length = 0;
  std::string error;  // nonempty when the cell failed

  bool failed() const { return !error.empty(); }
};

// Runs fit_path on freshly simulated data for each cell, repeated `reps`
// times with consecutive seeds. Only the fit is timed; generation and
// bookkeeping sit outside the clock. Failures are recorded per cell and the
// run continues.
std::vector<BenchRecord> run_bench(const std::vector<BenchCell>& cells, int reps);

// Tab-separated table, one row per record.
void write_bench_table(const std::vector<BenchRecord>& records, std::ostream& out);

}  // namespace clogit
