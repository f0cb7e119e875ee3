#pragma once

#include <vector>

#include <Eigen/Dense>

#include "clogit/dataset.hpp"
#include "clogit/errors.hpp"
#include "clogit/likelihood.hpp"

namespace clogit {

struct PenaltyConfig {
  double alpha = 1.0;
  double lambda = 0.0;
  double inner_tol = 1e-7;
  double outer_tol = 1e-6;
  int max_inner = 10000;
  int max_outer = 35;
  // When positive, the outer loop runs until the working-set stationarity
  // residual (measured on a fresh score) drops below this value. Zero keeps
  // the plain coefficient/objective stopping rule.
  double kkt_target = 0.0;
};

double soft_threshold(double z, double g);

// Elastic-net penalty value at beta.
double penalty_value(const Eigen::VectorXd& beta, double lambda, double alpha);

// Penalized objective -l(beta) + penalty. Lower is better.
double penalized_objective(const Dataset& ds, const Eigen::VectorXd& beta, double lambda,
                           double alpha);

// Cyclic coordinate descent on the fixed penalized quadratic model built at
// `model.expansion`. Starts from `beta` restricted to model.hess_set and
// updates it in place. Returns the number of sweeps used. Throws
// ConvergenceError carrying the last iterate if max_inner is exhausted.
int cd_epoch(const QuadraticModel& model, Eigen::VectorXd& beta, const PenaltyConfig& cfg,
             double coord_tol);

struct NewtonResult {
  Eigen::VectorXd beta;
  Eigen::VectorXd score;  // score of the unpenalized log-likelihood at beta
  int outer_iters = 0;
  bool converged = false;
  double objective = 0.0;
  std::vector<double> objective_trace;
};

// Penalized Newton iteration over a fixed working set: rebuild the quadratic
// model, minimize it by coordinate descent, step-halve until the true
// objective does not increase. score0, when given, must be the score at
// beta0 and saves the first evaluation.
NewtonResult newton_solve(const Dataset& ds, const Eigen::VectorXd& beta0,
                          const std::vector<int>& working_set, const PenaltyConfig& cfg,
                          const Eigen::VectorXd* score0 = nullptr);

}  // namespace clogit
