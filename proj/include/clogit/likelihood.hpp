#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "clogit/dataset.hpp"

namespace clogit {

// Sparse coefficient vector: sorted nonzero indices with matching values.
struct SparseCoefs {
  std::vector<int> index;
  std::vector<double> value;

  static SparseCoefs from_dense(const Eigen::VectorXd& beta);
  Eigen::VectorXd to_dense(int p) const;
  int df() const { return static_cast<int>(index.size()); }
};

// Dynamic-programming tables for one stratum's normalizing constant and its
// derivatives. All tables are kept on a shifted scale: the maximum linear
// predictor is subtracted before exponentiating, so every entry of B stays
// in [0, C(n', m')] and the recursion cannot overflow. The true quantity is
// recovered as log B(m, n) = log B_shifted(m, n) + m * shift; derivative
// ratios Bdot/B and Bddot/B are shift-invariant.
struct RecursionWorkspace {
  int m = 0;
  int n = 0;
  double shift = 0.0;
  Eigen::MatrixXd B;  // (m+1) x (n+1); B(0, *) = 1, B(m', n') = 0 for m' > n'
  std::vector<int> coords;                  // requested coordinates
  std::vector<Eigen::MatrixXd> Bdot;        // one table per coords[i]
  std::vector<std::pair<int, int>> pairs;   // upper triangle over coords, diagonal included
  std::vector<Eigen::MatrixXd> Bddot;       // one table per pair; empty unless second derivatives requested

  double log_norm_const() const;
  // Bdot(m, n) / B(m, n) for the i-th requested coordinate.
  double dot_ratio(int i) const;
  // Bddot(m, n) / B(m, n) for the i-th stored pair.
  double ddot_ratio(int i) const;
};

// log B_k(m, n) via the dynamic-programming recursion, O(m(n-m)) cells.
// m = 0 returns 0 (empty product over an empty case set, B = 1).
double norm_const(const Stratum& st, const Eigen::VectorXd& beta);

// Fills the shifted B table plus first-derivative tables for each requested
// coordinate and, when want_second is set, second-derivative tables for
// every upper-triangle coordinate pair (diagonal pairs included).
RecursionWorkspace norm_const_derivs(const Stratum& st, const Eigen::VectorXd& beta,
                                     const std::vector<int>& coords, bool want_second);

// Score and negative-Hessian blocks of the log conditional likelihood at an
// expansion point. The score covers all p coordinates; Hessian entries are
// computed for hess_set only (hdiag is zero outside it).
struct QuadraticModel {
  Eigen::VectorXd score;       // length p
  Eigen::VectorXd hdiag;       // length p; populated on hess_set, 0 elsewhere
  Eigen::MatrixXd hblock;      // |hess_set| x |hess_set|, symmetric
  std::vector<int> hess_set;   // sorted coordinate ids indexing hblock
  Eigen::VectorXd expansion;   // beta at which the model was built
};

QuadraticModel score_hessian(const Dataset& ds, const Eigen::VectorXd& beta,
                             const std::vector<int>& hess_set);

// Hessian block over hess_set alone, skipping the full-p score pass; equals
// the hblock returned by score_hessian with the same arguments.
Eigen::MatrixXd hessian_block(const Dataset& ds, const Eigen::VectorXd& beta,
                              const std::vector<int>& hess_set);

// Log conditional likelihood contribution of a single stratum.
double stratum_loglik(const Stratum& st, const Eigen::VectorXd& beta);

// l(beta) = sum_k [ beta . sum_{cases} X_ki - log B_k(m_k, n_k) ]; always <= 0.
double log_cond_likelihood(const Dataset& ds, const Eigen::VectorXd& beta);

struct Deviance {
  double value = 0.0;      // D(beta) = -2 l(beta)
  double null_value = 0.0; // D(0) = 2 sum_k log C(n_k, m_k)
  double explained = 0.0;  // (null_value - value) / null_value
};

Deviance deviance(const Dataset& ds, const Eigen::VectorXd& beta);

// Exhaustive enumeration over all C(n, m) case subsets of one stratum.
// Independent of the recursion code path; used as the oracle against it.
struct EnumeratedModel {
  double log_norm_const = 0.0;
  std::vector<std::vector<int>> subsets;  // each sorted ascending
  std::vector<double> prob;               // p_ku per subset, sums to 1
  Eigen::VectorXd mu;                     // E[z_u] = Bdot / B
  Eigen::MatrixXd second_moment;          // E[z_u z_u^T] = Bddot / B
  Eigen::MatrixXd hessian;                // second_moment - mu mu^T
};

EnumeratedModel brute_force_model(const Stratum& st, const Eigen::VectorXd& beta,
                                  std::int64_t max_subsets = 1000000);

// C(n, m) as a real; used for guards and the null deviance.
double binomial_coefficient(int n, int m);

}  // namespace clogit
