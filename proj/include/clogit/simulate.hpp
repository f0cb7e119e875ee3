#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "clogit/dataset.hpp"

namespace clogit {

struct SimConfig {
  int K = 10;  // strata
  int n = 10;  // observations per stratum
  int m = 5;   // cases per stratum
  int p = 200;
  enum class SupportRule { quarter, tenth, explicit_q };
  SupportRule support_rule = SupportRule::quarter;
  int q = 0;  // used when support_rule is explicit_q
  double coef_magnitude = 2.0;
  double intercept_sd = 0.0;
  std::uint64_t seed = 0;

  int support_size() const;
  void validate() const;
};

struct SimulatedData {
  Dataset data;
  Eigen::VectorXd true_beta;
  std::vector<int> support;     // sorted nonzero coordinates
  Eigen::VectorXd intercepts;   // one per stratum
};

// Matched case-control generator. Regressors are iid standard normal, the
// support is a uniform draw of q coordinates with random signs and fixed
// magnitude, intercepts are N(0, intercept_sd^2), and each stratum's m cases
// are a sequential weighted sample without replacement with weights
// proportional to the logistic success probabilities. Each randomness source
// draws from its own seed stream, in a fixed documented order (strata in
// index order, rows within a stratum in index order, columns within a row in
// index order), so runs are fully reproducible.
SimulatedData simulate(const SimConfig& cfg);

}  // namespace clogit
