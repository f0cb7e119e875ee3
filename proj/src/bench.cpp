#include "clogit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <ostream>

#include "clogit/errors.hpp"
#include "clogit/io.hpp"

namespace clogit {

std::vector<BenchRecord> run_bench(const std::vector<BenchCell>& cells, int reps) {
  if (reps < 1) throw ParameterError("benchmark needs at least one repetition");
  std::vector<BenchRecord> records;
  records.reserve(cells.size());
  for (const auto& cell : cells) {
    BenchRecord rec;
    rec.label = cell.label;
    rec.K = cell.sim.K;
    rec.n = cell.sim.n;
    rec.m = cell.sim.m;
    rec.p = cell.sim.p;
    rec.reps = reps;
    std::vector<double> times;
    double strong_acc = 0.0;
    double viol_acc = 0.0;
    try {
      for (int r = 0; r < reps; ++r) {
        SimConfig sim = cell.sim;
        sim.seed = cell.sim.seed + static_cast<std::uint64_t>(r);
        const SimulatedData data = simulate(sim);
        const auto start = std::chrono::steady_clock::now();
        const PathSolution sol = fit_path(data.data, cell.path);
        const auto stop = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double>(stop - start).count());
        strong_acc += *std::max_element(sol.strong_sizes.begin(), sol.strong_sizes.end());
        viol_acc += std::accumulate(sol.kkt_violations.begin(), sol.kkt_violations.end(), 0);
        rec.path_length = static_cast<int>(sol.lambdas.size());
      }
      rec.mean_time = std::accumulate(times.begin(), times.end(), 0.0) / reps;
      std::sort(times.begin(), times.end());
      rec.median_time = reps % 2 == 1
                            ? times[static_cast<std::size_t>(reps / 2)]
                            : 0.5 * (times[static_cast<std::size_t>(reps / 2) - 1] +
                                     times[static_cast<std::size_t>(reps / 2)]);
      rec.mean_max_strong = strong_acc / reps;
      rec.mean_violations = viol_acc / reps;
    } catch (const Error& e) {
      rec.error = e.what();
    }
    records.push_back(std::move(rec));
  }
  return records;
}

void write_bench_table(const std::vector<BenchRecord>& records, std::ostream& out) {
  out << "label\tK\tn\tm\tp\treps\tmean_s\tmedian_s\tmax_strong\tviolations\tnlambda\tstatus\n";
  for (const auto& rec : records) {
    out << rec.label << '\t' << rec.K << '\t' << rec.n << '\t' << rec.m << '\t' << rec.p << '\t'
        << rec.reps << '\t' << format_double(rec.mean_time) << '\t'
        << format_double(rec.median_time) << '\t' << format_double(rec.mean_max_strong) << '\t'
        << format_double(rec.mean_violations) << '\t' << rec.path_length << '\t'
        << (rec.failed() ? rec.error : "ok") << '\n';
  }
}

}  // namespace clogit
