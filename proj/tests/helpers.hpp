#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clogit/dataset.hpp"
#include "clogit/rng.hpp"

namespace testutil {

inline clogit::Stratum random_stratum(clogit::Rng& rng, int n, int m, int p,
                                      const std::string& id = "s") {
  clogit::Stratum st;
  st.id = id;
  st.n = n;
  st.m = m;
  st.X.resize(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) st.X(i, j) = rng.normal();
  return st;
}

inline clogit::Dataset random_dataset(clogit::Rng& rng, int K, int n, int m, int p) {
  clogit::Dataset ds;
  ds.p = p;
  for (int k = 0; k < K; ++k)
    ds.strata.push_back(random_stratum(rng, n, m, p, "s" + std::to_string(k)));
  return ds;
}

inline Eigen::VectorXd random_beta(clogit::Rng& rng, int p, double lo = -2.0, double hi = 2.0) {
  Eigen::VectorXd beta(p);
  for (int j = 0; j < p; ++j) beta[j] = lo + (hi - lo) * rng.uniform();
  return beta;
}

// Worst-case entry error scaled by the reference magnitude, floored at 1 so
// near-zero references are judged absolutely.
inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

inline double rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

inline double rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

// One predictor that separates cases from controls in every stratum, plus
// noise columns; drives the unpenalized estimate toward infinity.
inline clogit::Dataset separable_dataset(clogit::Rng& rng, int K = 10, int n = 4, int m = 2,
                                         int p = 3) {
  clogit::Dataset ds;
  ds.p = p;
  for (int k = 0; k < K; ++k) {
    clogit::Stratum st;
    st.id = "s" + std::to_string(k);
    st.n = n;
    st.m = m;
    st.X.resize(n, p);
    for (int i = 0; i < n; ++i) {
      st.X(i, 0) = (i < m ? 1.0 : -1.0) + 0.2 * rng.uniform();
      for (int j = 1; j < p; ++j) st.X(i, j) = rng.normal();
    }
    ds.strata.push_back(std::move(st));
  }
  return ds;
}

}  // namespace testutil
