#include "clogit/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace clogit {

namespace {

// Linear predictors for one stratum, shifted so the largest is 0 before
// exponentiating. Keeps every recursion table entry inside [0, C(n, m)].
struct ShiftedPredictors {
  Eigen::VectorXd eta;  // raw linear predictors
  Eigen::VectorXd w;    // exp(eta - shift)
  double shift = 0.0;
};

// X * beta, taking the cheap column-accumulation route when beta is sparse.
Eigen::VectorXd linear_predictor(const Stratum& st, const Eigen::VectorXd& beta) {
  const int p = static_cast<int>(st.X.cols());
  int nnz = 0;
  for (int j = 0; j < p; ++j)
    if (beta[j] != 0.0) ++nnz;
  if (4 * nnz >= p) return st.X * beta;
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(st.X.rows());
  for (int j = 0; j < p; ++j)
    if (beta[j] != 0.0) eta += beta[j] * st.X.col(j);
  return eta;
}

ShiftedPredictors shifted_predictors(const Stratum& st, const Eigen::VectorXd& beta) {
  if (beta.size() != st.X.cols())
    throw ParameterError("coefficient vector length " + std::to_string(beta.size()) +
                         " does not match p = " + std::to_string(st.X.cols()));
  ShiftedPredictors sp;
  sp.eta = linear_predictor(st, beta);
  if (!sp.eta.allFinite())
    throw NumericError("stratum '" + st.id + "': non-finite linear predictor");
  sp.shift = sp.eta.size() > 0 ? sp.eta.maxCoeff() : 0.0;
  sp.w = (sp.eta.array() - sp.shift).exp();
  return sp;
}

// One in-place pass of the normalizing-constant recursion: b[m'] holds
// B(m', i) after item i is folded in. Only rows that can still reach a full
// size-m subset are touched, giving the O(m(n-m)) cell count.
double shifted_norm_const(const Eigen::VectorXd& w, int m, const std::string& id) {
  const int n = static_cast<int>(w.size());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
  b[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const double wi = w[i - 1];
    const int hi = std::min(m, i);
    const int lo = std::max(1, m - (n - i));
    for (int r = hi; r >= lo; --r) b[r] += wi * b[r - 1];
  }
  if (!(b[m] > 0.0) || !std::isfinite(b[m]))
    throw NumericError("stratum '" + id + "': normalizing constant degenerated to " +
                       std::to_string(b[m]));
  return b[m];
}

}  // namespace

SparseCoefs SparseCoefs::from_dense(const Eigen::VectorXd& beta) {
  SparseCoefs sc;
  for (int j = 0; j < beta.size(); ++j) {
    if (beta[j] != 0.0) {
      sc.index.push_back(j);
      sc.value.push_back(beta[j]);
    }
  }
  return sc;
}

Eigen::VectorXd SparseCoefs::to_dense(int p) const {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (std::size_t i = 0; i < index.size(); ++i) beta[index[i]] = value[i];
  return beta;
}

double RecursionWorkspace::log_norm_const() const {
  return std::log(B(m, n)) + m * shift;
}

double RecursionWorkspace::dot_ratio(int i) const {
  return Bdot[static_cast<std::size_t>(i)](m, n) / B(m, n);
}

double RecursionWorkspace::ddot_ratio(int i) const {
  return Bddot[static_cast<std::size_t>(i)](m, n) / B(m, n);
}

double norm_const(const Stratum& st, const Eigen::VectorXd& beta) {
  if (st.m == 0) return 0.0;  // B(0, n) = 1
  const ShiftedPredictors sp = shifted_predictors(st, beta);
  return std::log(shifted_norm_const(sp.w, st.m, st.id)) + st.m * sp.shift;
}

RecursionWorkspace norm_const_derivs(const Stratum& st, const Eigen::VectorXd& beta,
                                     const std::vector<int>& coords, bool want_second) {
  const ShiftedPredictors sp = shifted_predictors(st, beta);
  const int m = st.m;
  const int n = st.n;
  const int d = static_cast<int>(coords.size());
  for (int j : coords)
    if (j < 0 || j >= st.X.cols())
      throw ParameterError("requested coordinate " + std::to_string(j) + " out of range");

  RecursionWorkspace ws;
  ws.m = m;
  ws.n = n;
  ws.shift = sp.shift;
  ws.coords = coords;
  ws.B = Eigen::MatrixXd::Zero(m + 1, n + 1);
  ws.B.row(0).setOnes();
  ws.Bdot.assign(static_cast<std::size_t>(d), Eigen::MatrixXd::Zero(m + 1, n + 1));
  if (want_second) {
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) ws.pairs.emplace_back(coords[a], coords[b]);
    ws.Bddot.assign(ws.pairs.size(), Eigen::MatrixXd::Zero(m + 1, n + 1));
  }

  for (int i = 1; i <= n; ++i) {
    const double wi = sp.w[i - 1];
    for (int r = 1; r <= m; ++r) {
      if (r > i) break;  // B(r, i) = 0 above the diagonal band
      ws.B(r, i) = ws.B(r, i - 1) + wi * ws.B(r - 1, i - 1);
      for (int a = 0; a < d; ++a) {
        const double xa = st.X(i - 1, coords[a]);
        ws.Bdot[a](r, i) = ws.Bdot[a](r, i - 1) + wi * ws.Bdot[a](r - 1, i - 1) +
                           xa * wi * ws.B(r - 1, i - 1);
      }
      if (want_second) {
        std::size_t q = 0;
        for (int a = 0; a < d; ++a) {
          const double xa = st.X(i - 1, coords[a]);
          for (int b = a; b < d; ++b, ++q) {
            const double xb = st.X(i - 1, coords[b]);
            ws.Bddot[q](r, i) = ws.Bddot[q](r, i - 1) + wi * ws.Bddot[q](r - 1, i - 1) +
                                xa * wi * ws.Bdot[b](r - 1, i - 1) +
                                xb * wi * ws.Bdot[a](r - 1, i - 1) +
                                xa * xb * wi * ws.B(r - 1, i - 1);
          }
        }
      }
    }
  }
  if (m > 0 && (!(ws.B(m, n) > 0.0) || !std::isfinite(ws.B(m, n))))
    throw NumericError("stratum '" + st.id + "': normalizing constant degenerated");
  return ws;
}

QuadraticModel score_hessian(const Dataset& ds, const Eigen::VectorXd& beta,
                             const std::vector<int>& hess_set) {
  const int p = ds.p;
  if (beta.size() != p) throw ParameterError("coefficient vector length does not match p");
  const int d = static_cast<int>(hess_set.size());
  for (int j : hess_set)
    if (j < 0 || j >= p) throw ParameterError("hess_set coordinate out of range");
  const int npairs = d * (d + 1) / 2;

  QuadraticModel q;
  q.score = Eigen::VectorXd::Zero(p);
  q.hdiag = Eigen::VectorXd::Zero(p);
  q.hblock = Eigen::MatrixXd::Zero(d, d);
  q.hess_set = hess_set;
  q.expansion = beta;

  // Rolling per-row tables, reused across strata. Row r of `dot` carries the
  // first-derivative recursion for subset size r across all p coordinates
  // (row-major so the per-item update is one contiguous sweep); pairs[r]
  // carries the second-derivative recursion for subset size r as a dense
  // d x d matrix so the per-item update is a pair of outer-product sweeps.
  Eigen::VectorXd b;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> dot;
  std::vector<Eigen::MatrixXd> pairs;
  Eigen::VectorXd mu(p);
  Eigen::VectorXd xrow(p);
  Eigen::VectorXd u(d);
  Eigen::VectorXd v(d);
  if (npairs > 0) {
    int mmax = 0;
    for (const auto& st : ds.strata) mmax = std::max(mmax, st.m);
    pairs.assign(static_cast<std::size_t>(mmax) + 1, Eigen::MatrixXd());
    for (auto& pm : pairs) pm.setZero(d, d);
  }

  for (const auto& st : ds.strata) {
    const ShiftedPredictors sp = shifted_predictors(st, beta);
    const int m = st.m;
    const int n = st.n;

    b.setZero(m + 1);
    b[0] = 1.0;
    dot.setZero(m + 1, p);
    if (npairs > 0)
      for (int r = 0; r <= m; ++r) pairs[static_cast<std::size_t>(r)].setZero();

    for (int i = 1; i <= n; ++i) {
      const double wi = sp.w[i - 1];
      xrow = st.X.row(i - 1);
      const int hi = std::min(m, i);
      const int lo = std::max(1, m - (n - i));
      // Update order matters: pair tables read old dot/b rows, dot reads old
      // b rows, so fold item i into pairs, then dot, then b. Only the upper
      // triangle of each pairs[r] is maintained; per-column axpy sweeps keep
      // the update free of temporaries.
      if (npairs > 0) {
        for (int a = 0; a < d; ++a) u[a] = xrow[hess_set[a]];
        for (int r = hi; r >= lo; --r) {
          for (int a = 0; a < d; ++a) v[a] = dot(r - 1, hess_set[a]);
          const double bprev = b[r - 1];
          Eigen::MatrixXd& cur = pairs[r];
          const Eigen::MatrixXd& prev = pairs[r - 1];
          for (int c = 0; c < d; ++c) {
            const double s1 = wi * (v[c] + bprev * u[c]);
            const double s2 = wi * u[c];
            cur.col(c).head(c + 1) += wi * prev.col(c).head(c + 1) +
                                      s1 * u.head(c + 1) + s2 * v.head(c + 1);
          }
        }
      }
      for (int r = hi; r >= lo; --r)
        dot.row(r) += wi * dot.row(r - 1) + (wi * b[r - 1]) * xrow.transpose();
      for (int r = hi; r >= lo; --r) b[r] += wi * b[r - 1];
    }

    if (!(b[m] > 0.0) || !std::isfinite(b[m]))
      throw NumericError("stratum '" + st.id + "': normalizing constant degenerated");

    mu = dot.row(m).transpose() / b[m];
    q.score += st.X.topRows(m).colwise().sum().transpose() - mu;

    if (npairs > 0) {
      for (int a = 0; a < d; ++a) u[a] = mu[hess_set[a]];
      for (int c = 0; c < d; ++c)
        for (int a = 0; a <= c; ++a) {
          const double hval = pairs[m](a, c) / b[m] - u[a] * u[c];
          q.hblock(a, c) += hval;
          if (a != c) q.hblock(c, a) += hval;
        }
    }
  }

  for (int a = 0; a < d; ++a) q.hdiag[hess_set[a]] = q.hblock(a, a);
  return q;
}

Eigen::MatrixXd hessian_block(const Dataset& ds, const Eigen::VectorXd& beta,
                              const std::vector<int>& hess_set) {
  const int p = ds.p;
  if (beta.size() != p) throw ParameterError("coefficient vector length does not match p");
  const int d = static_cast<int>(hess_set.size());
  for (int j : hess_set)
    if (j < 0 || j >= p) throw ParameterError("hess_set coordinate out of range");

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  if (d == 0) return h;

  // Same windowed one-pass recursion as score_hessian, but the derivative
  // tables cover hess_set columns only, dropping the O(cells * p) score work.
  Eigen::VectorXd b;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> dot;
  std::vector<Eigen::MatrixXd> pairs;
  Eigen::VectorXd x(d);
  Eigen::VectorXd v(d);
  Eigen::VectorXd mu(d);
  {
    int mmax = 0;
    for (const auto& st : ds.strata) mmax = std::max(mmax, st.m);
    pairs.assign(static_cast<std::size_t>(mmax) + 1, Eigen::MatrixXd());
    for (auto& pm : pairs) pm.setZero(d, d);
  }

  for (const auto& st : ds.strata) {
    const Eigen::VectorXd eta = linear_predictor(st, beta);
    if (!eta.allFinite())
      throw NumericError("stratum '" + st.id + "': non-finite linear predictor");
    const double shift = eta.maxCoeff();
    const int m = st.m;
    const int n = st.n;

    b.setZero(m + 1);
    b[0] = 1.0;
    dot.setZero(m + 1, d);
    for (int r = 0; r <= m; ++r) pairs[static_cast<std::size_t>(r)].setZero();

    for (int i = 1; i <= n; ++i) {
      const double wi = std::exp(eta[i - 1] - shift);
      for (int a = 0; a < d; ++a) x[a] = st.X(i - 1, hess_set[a]);
      const int hi = std::min(m, i);
      const int lo = std::max(1, m - (n - i));
      // Upper-triangle pair update via per-column axpy sweeps, as in
      // score_hessian.
      for (int r = hi; r >= lo; --r) {
        v = dot.row(r - 1);
        const double bprev = b[r - 1];
        Eigen::MatrixXd& cur = pairs[r];
        const Eigen::MatrixXd& prev = pairs[r - 1];
        for (int c = 0; c < d; ++c) {
          const double s1 = wi * (v[c] + bprev * x[c]);
          const double s2 = wi * x[c];
          cur.col(c).head(c + 1) += wi * prev.col(c).head(c + 1) +
                                    s1 * x.head(c + 1) + s2 * v.head(c + 1);
        }
      }
      for (int r = hi; r >= lo; --r)
        dot.row(r) += wi * (dot.row(r - 1) + b[r - 1] * x.transpose());
      for (int r = hi; r >= lo; --r) b[r] += wi * b[r - 1];
    }

    if (!(b[m] > 0.0) || !std::isfinite(b[m]))
      throw NumericError("stratum '" + st.id + "': normalizing constant degenerated");

    mu = dot.row(m).transpose() / b[m];
    for (int c = 0; c < d; ++c)
      for (int a = 0; a <= c; ++a) {
        const double hval = pairs[m](a, c) / b[m] - mu[a] * mu[c];
        h(a, c) += hval;
        if (a != c) h(c, a) += hval;
      }
  }
  return h;
}

double stratum_loglik(const Stratum& st, const Eigen::VectorXd& beta) {
  const ShiftedPredictors sp = shifted_predictors(st, beta);
  const double log_b = std::log(shifted_norm_const(sp.w, st.m, st.id)) + st.m * sp.shift;
  return sp.eta.head(st.m).sum() - log_b;
}

double log_cond_likelihood(const Dataset& ds, const Eigen::VectorXd& beta) {
  double l = 0.0;
  for (const auto& st : ds.strata) l += stratum_loglik(st, beta);
  return l;
}

Deviance deviance(const Dataset& ds, const Eigen::VectorXd& beta) {
  Deviance d;
  d.value = -2.0 * log_cond_likelihood(ds, beta);
  double log_binom = 0.0;
  for (const auto& st : ds.strata)
    log_binom += std::lgamma(st.n + 1.0) - std::lgamma(st.m + 1.0) - std::lgamma(st.n - st.m + 1.0);
  d.null_value = 2.0 * log_binom;
  d.explained = d.null_value > 0.0 ? (d.null_value - d.value) / d.null_value : 0.0;
  return d;
}

double binomial_coefficient(int n, int m) {
  if (m < 0 || m > n) return 0.0;
  m = std::min(m, n - m);
  double c = 1.0;
  for (int i = 1; i <= m; ++i) c = c * (n - m + i) / i;
  return c;
}

EnumeratedModel brute_force_model(const Stratum& st, const Eigen::VectorXd& beta,
                                  std::int64_t max_subsets) {
  const int n = st.n;
  const int m = st.m;
  const int p = static_cast<int>(st.X.cols());
  const double n_subsets = binomial_coefficient(n, m);
  if (n_subsets > static_cast<double>(max_subsets))
    throw ParameterError("stratum '" + st.id + "': C(" + std::to_string(n) + ", " +
                         std::to_string(m) + ") exceeds the enumeration guard");

  const ShiftedPredictors sp = shifted_predictors(st, beta);

  EnumeratedModel em;
  std::vector<double> shifted_terms;
  std::vector<Eigen::VectorXd> zs;

  std::vector<int> u(m);
  std::iota(u.begin(), u.end(), 0);
  while (true) {
    double t = 0.0;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(p);
    for (int i : u) {
      t += sp.eta[i] - sp.shift;
      z += st.X.row(i).transpose();
    }
    em.subsets.push_back(u);
    shifted_terms.push_back(std::exp(t));
    zs.push_back(std::move(z));

    // next combination in lexicographic order
    int k = m - 1;
    while (k >= 0 && u[k] == n - m + k) --k;
    if (k < 0) break;
    ++u[k];
    for (int i = k + 1; i < m; ++i) u[i] = u[i - 1] + 1;
  }

  const double total = std::accumulate(shifted_terms.begin(), shifted_terms.end(), 0.0);
  em.log_norm_const = std::log(total) + m * sp.shift;
  em.prob.resize(shifted_terms.size());
  em.mu = Eigen::VectorXd::Zero(p);
  em.second_moment = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t s = 0; s < shifted_terms.size(); ++s) {
    em.prob[s] = shifted_terms[s] / total;
    em.mu += em.prob[s] * zs[s];
    em.second_moment += em.prob[s] * (zs[s] * zs[s].transpose());
  }
  em.hessian = em.second_moment - em.mu * em.mu.transpose();
  return em;
}

}  // namespace clogit
