#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "clogit/errors.hpp"

namespace clogit {

// One matched set. Rows 0..m-1 are the cases and rows m..n-1 the controls;
// every downstream likelihood formula relies on that ordering.
struct Stratum {
  std::string id;
  int n = 0;  // observations
  int m = 0;  // cases
  Eigen::MatrixXd X;  // n x p regressors, cases first

  bool degenerate() const { return m <= 0 || m >= n; }
};

struct Dataset {
  std::vector<Stratum> strata;
  int p = 0;
  std::vector<std::string> names;  // p predictor labels

  int n_strata() const { return static_cast<int>(strata.size()); }
  int n_rows() const;

  // Throws FormatError if any structural invariant is broken
  // (empty, mismatched p, degenerate stratum, bad case counts).
  void validate() const;
};

struct InputRow {
  std::string stratum;
  bool is_case = false;
  std::vector<double> x;
};

// Groups rows by stratum label in first-appearance order; within a stratum
// cases are placed before controls, each group keeping input order. Strata
// with no cases or no controls carry a constant likelihood factor and are
// dropped with a warning.
Dataset build_dataset(const std::vector<InputRow>& rows,
                      std::vector<std::string> names = {},
                      std::vector<std::string>* warnings = nullptr);

struct ScalingInfo {
  Eigen::VectorXd center;      // per-predictor mean over all pooled rows
  Eigen::VectorXd scale;       // population standard deviation; 1 for excluded columns
  std::vector<bool> excluded;  // zero-variance predictors, coefficients pinned at 0

  int n_excluded() const;

  // Maps a coefficient vector fitted on the standardized scale back to the
  // original predictor scale: beta_orig[j] = beta_std[j] / scale[j].
  Eigen::VectorXd to_original(const Eigen::VectorXd& beta_std) const;
};

// Identity transform (center 0, scale 1), used when standardization is off.
ScalingInfo identity_scaling(int p);

// Centers and scales every predictor to mean 0, standard deviation 1 over
// the pooled rows (population convention, divide by N). Zero-variance
// columns are flagged, set to 0 and excluded from fitting.
std::pair<Dataset, ScalingInfo> standardize(const Dataset& ds);

}  // namespace clogit
