#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clogit/dataset.hpp"
#include "clogit/path.hpp"

namespace clogit {

struct FoldAssignment {
  int nfolds = 0;
  std::vector<int> fold_of_stratum;  // stratum index -> fold index
  std::uint64_t seed = 0;
};

// Deterministic seeded shuffle of stratum indices dealt round-robin, so fold
// sizes differ by at most one stratum.
FoldAssignment make_folds(const Dataset& ds, int nfolds, std::uint64_t seed);

struct CVResult {
  std::vector<double> lambdas;
  std::vector<double> cv_mean;  // negated fold mean of held-out log-likelihood
  std::vector<double> cv_se;
  double lambda_min = 0.0;
  double lambda_1se = 0.0;
  int index_min = -1;
  int index_1se = -1;
  // Held-out log-likelihood contribution per fold and lambda; dropped folds
  // hold NaN rows.
  Eigen::MatrixXd per_fold;
  int folds_used = 0;
  PathSolution master;
};

// Fits a master path on the full data to fix the lambda grid, then refits on
// each fold's complement over that grid and scores the held-out strata.
CVResult cross_validate(const Dataset& ds, const PathOptions& opts, const FoldAssignment& folds,
                        int threads = 1, std::vector<std::string>* warnings = nullptr);

struct ThresholdSet {
  std::vector<double> t;       // one threshold per training stratum
  std::vector<int> misclass;   // within-stratum misclassification count at t
  std::vector<bool> degenerate;
};

// Grid search over each stratum's observed linear predictors: classify case
// iff eta > t, pick the candidate with the fewest misclassifications,
// breaking ties toward the smallest threshold.
ThresholdSet stratum_thresholds(const Dataset& ds, const Eigen::VectorXd& beta);

enum class PredictMethod { mean, committee };

// Labels (1 = case) for new rows: mean compares the linear predictor to the
// average threshold; committee takes a majority vote over per-stratum
// thresholds, ties predicting control.
std::vector<int> predict(const Eigen::MatrixXd& newX, const Eigen::VectorXd& beta,
                         const ThresholdSet& thr, PredictMethod method);

struct RocCurve {
  std::vector<double> sensitivity;  // per path entry, in path order
  std::vector<double> specificity;
  std::vector<double> avg_sensitivity;  // unique sensitivities, ascending
  std::vector<double> avg_specificity;  // mean specificity at each
};

// Support-recovery operating points of a fitted path against the true
// nonzero set, plus the sensitivity-averaged curve.
RocCurve roc_points(const PathSolution& path, const std::vector<int>& true_support);

}  // namespace clogit
