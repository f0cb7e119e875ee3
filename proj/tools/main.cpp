#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clogit/bench.hpp"
#include "clogit/cv.hpp"
#include "clogit/io.hpp"
#include "clogit/path.hpp"
#include "clogit/simulate.hpp"

namespace {

struct FitFlags {
  double alpha = 1.0;
  int nlambda = 100;
  double epsilon = 1e-5;
  std::string grid = "hybrid";
  int linear_steps = -1;  // auto: 90% of nlambda
  double switch_frac = 0.1;
  bool no_standardize = false;
  bool no_screen = false;
  double kkt_tol = 1e-4;
  bool no_early_stop = false;
};

void add_fit_flags(CLI::App* cmd, FitFlags& f) {
  cmd->add_option("--alpha", f.alpha, "Elastic-net mixing parameter in (0,1]");
  cmd->add_option("--nlambda", f.nlambda, "Grid length");
  cmd->add_option("--epsilon", f.epsilon, "lambda_min = epsilon * lambda_max");
  cmd->add_option("--grid", f.grid, "Grid kind: log, linear, or hybrid")
      ->check(CLI::IsMember({"log", "logarithmic", "linear", "hybrid"}));
  cmd->add_option("--linear-steps", f.linear_steps,
                  "Hybrid grid: arithmetic steps before the logarithmic tail (default 90% of nlambda)");
  cmd->add_option("--switch-frac", f.switch_frac, "Hybrid grid: fraction of lambda_max where the tail starts");
  cmd->add_flag("--no-standardize", f.no_standardize, "Skip predictor standardization");
  cmd->add_flag("--no-screen", f.no_screen, "Disable strong-rule screening");
  cmd->add_option("--kkt-tol", f.kkt_tol, "Relative KKT audit tolerance");
  cmd->add_flag("--no-early-stop", f.no_early_stop, "Always run the full grid");
}

clogit::PathOptions to_options(const FitFlags& f) {
  clogit::PathOptions opts;
  opts.alpha = f.alpha;
  opts.grid.nlambda = f.nlambda;
  opts.grid.epsilon = f.epsilon;
  if (f.grid == "linear")
    opts.grid.kind = clogit::GridSpec::Kind::linear;
  else if (f.grid == "hybrid")
    opts.grid.kind = clogit::GridSpec::Kind::hybrid;
  else
    opts.grid.kind = clogit::GridSpec::Kind::logarithmic;
  opts.grid.linear_steps =
      f.linear_steps > 0 ? f.linear_steps
                         : std::max(1, std::min(f.nlambda - 2, 9 * f.nlambda / 10));
  opts.grid.switch_frac = f.switch_frac;
  opts.standardize = !f.no_standardize;
  opts.screen = !f.no_screen;
  opts.kkt_tol = f.kkt_tol;
  opts.early_stop = !f.no_early_stop;
  return opts;
}

// "-" or empty selects stdout
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(clogit::open_output(path));
      os_ = file_.get();
    } else {
      os_ = &std::cout;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact elastic-net penalized conditional logistic regression"};
  app.require_subcommand(1);

  auto* fit_cmd = app.add_subcommand("fit", "Fit a regularization path and write a path file");
  std::string fit_data, fit_out;
  FitFlags fit_flags;
  fit_cmd->add_option("data", fit_data, "Input CSV: stratum,y,predictors...")->required();
  fit_cmd->add_option("--out", fit_out, "Output path file (default stdout)");
  add_fit_flags(fit_cmd, fit_flags);

  auto* cv_cmd = app.add_subcommand("cv", "Cross-validate lambda by leaving out whole strata");
  std::string cv_data, cv_out, cv_path_out;
  FitFlags cv_flags;
  int cv_folds = 10;
  std::uint64_t cv_seed = 0;
  int cv_threads = 1;
  cv_cmd->add_option("data", cv_data, "Input CSV")->required();
  cv_cmd->add_option("--folds", cv_folds, "Number of folds (2..K)");
  cv_cmd->add_option("--seed", cv_seed, "Fold shuffle seed");
  cv_cmd->add_option("--threads", cv_threads, "Concurrent fold fits");
  cv_cmd->add_option("--out", cv_out, "Output CV file (default stdout)");
  cv_cmd->add_option("--path-out", cv_path_out, "Also write the master path file here");
  add_fit_flags(cv_cmd, cv_flags);

  auto* sim_cmd = app.add_subcommand("simulate", "Generate a matched case-control dataset");
  clogit::SimConfig sim_cfg;
  sim_cfg.support_rule = clogit::SimConfig::SupportRule::explicit_q;
  std::string sim_out, sim_truth, sim_support = "explicit";
  sim_cmd->add_option("--K", sim_cfg.K, "Strata");
  sim_cmd->add_option("--n", sim_cfg.n, "Observations per stratum");
  sim_cmd->add_option("--m", sim_cfg.m, "Cases per stratum");
  sim_cmd->add_option("--p", sim_cfg.p, "Predictors");
  sim_cmd->add_option("--q", sim_cfg.q, "Nonzero coefficients (with --support explicit)");
  sim_cmd->add_option("--support", sim_support, "Support rule: quarter, tenth, or explicit")
      ->check(CLI::IsMember({"quarter", "tenth", "explicit"}));
  sim_cmd->add_option("--coef-magnitude", sim_cfg.coef_magnitude, "Magnitude of nonzero coefficients");
  sim_cmd->add_option("--intercept-sd", sim_cfg.intercept_sd, "Stratum intercept standard deviation");
  sim_cmd->add_option("--seed", sim_cfg.seed, "Generator seed");
  sim_cmd->add_option("--out", sim_out, "Dataset CSV (default stdout)");
  sim_cmd->add_option("--truth", sim_truth, "Also write the true coefficients here");

  auto* bench_cmd = app.add_subcommand("bench", "Time path fits over simulated designs");
  int bench_K = 10, bench_n = 10, bench_m = 5, bench_B = 3;
  std::uint64_t bench_seed = 1;
  std::vector<int> bench_p{100, 200};
  std::vector<std::string> bench_grids{"hybrid9010", "log"};
  std::string bench_out;
  bench_cmd->add_option("--K", bench_K, "Strata");
  bench_cmd->add_option("--n", bench_n, "Observations per stratum");
  bench_cmd->add_option("--m", bench_m, "Cases per stratum");
  bench_cmd->add_option("--p", bench_p, "Predictor counts (comma separated)")->delimiter(',');
  bench_cmd->add_option("--grids", bench_grids, "Grids: log, linear, hybrid8020, hybrid9010")
      ->delimiter(',')
      ->check(CLI::IsMember({"log", "linear", "hybrid8020", "hybrid9010"}));
  bench_cmd->add_option("--B", bench_B, "Repetitions per cell");
  bench_cmd->add_option("--seed", bench_seed, "Base simulation seed");
  bench_cmd->add_option("--out", bench_out, "Output table (default stdout)");

  auto* roc_cmd = app.add_subcommand("roc", "Support-recovery ROC of a path against the truth");
  std::string roc_path, roc_truth, roc_out;
  roc_cmd->add_option("path", roc_path, "Path file from fit")->required();
  roc_cmd->add_option("truth", roc_truth, "Truth file from simulate")->required();
  roc_cmd->add_option("--out", roc_out, "Output (default stdout)");

  auto* plot_cmd = app.add_subcommand("plotdata", "Tidy coefficient-profile triples from a path file");
  std::string plot_path, plot_out;
  plot_cmd->add_option("path", plot_path, "Path file from fit")->required();
  plot_cmd->add_option("--out", plot_out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*fit_cmd) {
      std::vector<std::string> warnings;
      const clogit::Dataset ds = clogit::read_dataset_csv(fit_data, &warnings);
      print_warnings(warnings);
      const clogit::PathSolution sol = clogit::fit_path(ds, to_options(fit_flags));
      OutputTarget out(fit_out);
      clogit::write_path_file(sol, ds.names, out.stream());
    } else if (*cv_cmd) {
      std::vector<std::string> warnings;
      const clogit::Dataset ds = clogit::read_dataset_csv(cv_data, &warnings);
      const clogit::FoldAssignment folds = clogit::make_folds(ds, cv_folds, cv_seed);
      const clogit::CVResult res =
          clogit::cross_validate(ds, to_options(cv_flags), folds, cv_threads, &warnings);
      print_warnings(warnings);
      OutputTarget out(cv_out);
      clogit::write_cv_file(res, out.stream());
      if (!cv_path_out.empty()) {
        OutputTarget pout(cv_path_out);
        clogit::write_path_file(res.master, ds.names, pout.stream());
      }
    } else if (*sim_cmd) {
      if (sim_support == "quarter")
        sim_cfg.support_rule = clogit::SimConfig::SupportRule::quarter;
      else if (sim_support == "tenth")
        sim_cfg.support_rule = clogit::SimConfig::SupportRule::tenth;
      else
        sim_cfg.support_rule = clogit::SimConfig::SupportRule::explicit_q;
      const clogit::SimulatedData sim = clogit::simulate(sim_cfg);
      OutputTarget out(sim_out);
      clogit::write_dataset_csv(sim.data, out.stream());
      if (!sim_truth.empty()) {
        OutputTarget tout(sim_truth);
        clogit::write_truth_file(sim, tout.stream());
      }
    } else if (*bench_cmd) {
      std::vector<clogit::BenchCell> cells;
      for (const std::string& g : bench_grids) {
        for (int p : bench_p) {
          clogit::BenchCell cell;
          cell.label = g;
          cell.sim.K = bench_K;
          cell.sim.n = bench_n;
          cell.sim.m = bench_m;
          cell.sim.p = p;
          cell.sim.support_rule = clogit::SimConfig::SupportRule::quarter;
          cell.sim.seed = bench_seed;
          if (g == "log") {
            cell.path.grid.kind = clogit::GridSpec::Kind::logarithmic;
          } else if (g == "linear") {
            cell.path.grid.kind = clogit::GridSpec::Kind::linear;
          } else {
            cell.path.grid.kind = clogit::GridSpec::Kind::hybrid;
            cell.path.grid.linear_steps = g == "hybrid8020" ? 80 : 90;
          }
          cells.push_back(std::move(cell));
        }
      }
      const std::vector<clogit::BenchRecord> records = clogit::run_bench(cells, bench_B);
      OutputTarget out(bench_out);
      clogit::write_bench_table(records, out.stream());
    } else if (*roc_cmd) {
      const clogit::PathFile pf = clogit::read_path_file(roc_path);
      const clogit::TruthFile tf = clogit::read_truth_file(roc_truth);
      const clogit::RocCurve rc = clogit::roc_points(pf.sol, tf.support);
      OutputTarget out(roc_out);
      clogit::write_roc_file(rc, pf.sol.lambdas, out.stream());
    } else if (*plot_cmd) {
      const clogit::PathFile pf = clogit::read_path_file(plot_path);
      OutputTarget out(plot_out);
      clogit::write_plot_data(pf, out.stream());
    }
  } catch (const clogit::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return 2;
  } catch (const clogit::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 3;
  } catch (const clogit::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 4;
  } catch (const clogit::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << '\n';
    return 5;
  } catch (const clogit::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 6;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
