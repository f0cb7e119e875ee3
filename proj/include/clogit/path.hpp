#pragma once

#include <vector>

#include <Eigen/Dense>

#include "clogit/dataset.hpp"
#include "clogit/likelihood.hpp"
#include "clogit/solver.hpp"

namespace clogit {

struct GridSpec {
  enum class Kind { logarithmic, linear, hybrid };
  Kind kind = Kind::hybrid;
  int nlambda = 100;
  double epsilon = 1e-5;   // lambda_min = epsilon * lambda_max
  int linear_steps = 90;   // hybrid: arithmetic steps down to switch_frac * lambda_max
  double switch_frac = 0.1;
};

// Smallest lambda with an all-zero solution: max_j |s_j(0)| / alpha.
double lambda_max(const Dataset& ds, double alpha);

std::vector<double> make_grid(double lmax, const GridSpec& spec);

// Sequential strong rule at lambda_cur given the score at the previous
// solution on the path (solved at lambda_prev), plus every coordinate that
// has ever been active.
std::vector<int> strong_set(const Eigen::VectorXd& score_prev, double lambda_prev,
                            double lambda_cur, double alpha,
                            const std::vector<int>& ever_active);

// Coordinates violating the stationarity conditions at (beta, score by more
// than tol, relative to the l1 penalty weight lambda * alpha.
std::vector<int> kkt_check(const Eigen::VectorXd& score, const Eigen::VectorXd& beta,
                           double lambda, double alpha, double tol);

struct PathOptions {
  double alpha = 1.0;
  GridSpec grid;
  bool screen = true;         // strong-rule screening with KKT repair
  double kkt_tol = 1e-4;
  double dev_cutoff = 0.99;   // stop once deviance explained reaches this
  bool early_stop = true;
  PenaltyConfig control;      // lambda/kkt_target are managed per grid point
  std::vector<double> lambda_path;  // overrides the grid when nonempty
  bool standardize = true;
};

struct PathSolution {
  std::vector<double> lambdas;
  std::vector<SparseCoefs> betas;  // standardized scale
  std::vector<int> df;
  std::vector<double> dev_explained;
  std::vector<int> strong_sizes;
  std::vector<int> kkt_violations;  // pre-repair violation count per grid point
  std::vector<bool> converged;
  ScalingInfo scaling;
  double lambda_max = 0.0;
  double dev_null = 0.0;
  int p = 0;

  Eigen::VectorXd beta_std(int k) const { return betas[static_cast<std::size_t>(k)].to_dense(p); }
  Eigen::VectorXd beta_original(int k) const { return scaling.to_original(beta_std(k)); }
};

// Full regularization path on `ds` (already standardized when
// opts.standardize is false; otherwise standardized internally).
PathSolution fit_path(const Dataset& ds, const PathOptions& opts);

}  // namespace clogit
