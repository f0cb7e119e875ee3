#include "clogit/path.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace clogit {

double lambda_max(const Dataset& ds, double alpha) {
  if (alpha <= 0.0 || alpha > 1.0)
    throw ParameterError("alpha must lie in (0, 1] to define lambda_max");
  const Eigen::VectorXd s0 = score_hessian(ds, Eigen::VectorXd::Zero(ds.p), {}).score;
  const double smax = s0.cwiseAbs().maxCoeff();
  if (smax <= 0.0)
    throw ParameterError("score at zero vanishes in every coordinate; no penalized path exists");
  return smax / alpha;
}

std::vector<double> make_grid(double lmax, const GridSpec& spec) {
  if (!(lmax > 0.0)) throw ParameterError("lambda_max must be positive");
  if (spec.nlambda < 2) throw ParameterError("nlambda must be at least 2");
  if (!(spec.epsilon > 0.0 && spec.epsilon < 1.0))
    throw ParameterError("epsilon must lie in (0, 1)");
  const double lmin = spec.epsilon * lmax;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(spec.nlambda));
  const int gaps = spec.nlambda - 1;
  switch (spec.kind) {
    case GridSpec::Kind::logarithmic: {
      const double ratio = std::log(spec.epsilon);
      for (int i = 0; i <= gaps; ++i) grid.push_back(lmax * std::exp(ratio * i / gaps));
      break;
    }
    case GridSpec::Kind::linear: {
      for (int i = 0; i <= gaps; ++i)
        grid.push_back(lmax + (lmin - lmax) * static_cast<double>(i) / gaps);
      break;
    }
    case GridSpec::Kind::hybrid: {
      if (spec.linear_steps < 1 || spec.linear_steps >= gaps)
        throw ParameterError("hybrid grid needs 1 <= linear_steps <= nlambda - 2");
      if (!(spec.switch_frac > spec.epsilon && spec.switch_frac < 1.0))
        throw ParameterError("hybrid switch point must lie in (epsilon, 1)");
      const double lswitch = spec.switch_frac * lmax;
      for (int i = 0; i < spec.linear_steps; ++i)
        grid.push_back(lmax + (lswitch - lmax) * static_cast<double>(i) / spec.linear_steps);
      const int log_gaps = gaps - spec.linear_steps;
      const double ratio = std::log(lmin / lswitch);
      for (int t = 0; t <= log_gaps; ++t)
        grid.push_back(lswitch * std::exp(ratio * t / log_gaps));
      break;
    }
  }
  grid.front() = lmax;
  grid.back() = lmin;
  return grid;
}

std::vector<int> strong_set(const Eigen::VectorXd& score_prev, double lambda_prev,
                            double lambda_cur, double alpha,
                            const std::vector<int>& ever_active) {
  const double thr = alpha * (2.0 * lambda_cur - lambda_prev);
  std::set<int> keep(ever_active.begin(), ever_active.end());
  for (int j = 0; j < score_prev.size(); ++j)
    if (thr <= 0.0 || std::abs(score_prev[j]) > thr) keep.insert(j);
  return {keep.begin(), keep.end()};
}

std::vector<int> kkt_check(const Eigen::VectorXd& score, const Eigen::VectorXd& beta,
                           double lambda, double alpha, double tol) {
  const double l1 = lambda * alpha;
  const double l2 = lambda * (1.0 - alpha);
  std::vector<int> violators;
  for (int j = 0; j < beta.size(); ++j) {
    bool bad;
    if (beta[j] == 0.0) {
      bad = std::abs(score[j]) > l1 * (1.0 + tol);
    } else {
      const double resid =
          std::abs(score[j] - l2 * beta[j] - l1 * (beta[j] > 0.0 ? 1.0 : -1.0));
      bad = l1 > 0.0 ? resid > l1 * tol : resid > tol;
    }
    if (bad) violators.push_back(j);
  }
  return violators;
}

PathSolution fit_path(const Dataset& ds, const PathOptions& opts) {
  ds.validate();
  if (opts.alpha <= 0.0 || opts.alpha > 1.0)
    throw ParameterError("alpha must lie in (0, 1] for path fitting");

  Dataset work;
  ScalingInfo scaling;
  if (opts.standardize) {
    auto std_pair = standardize(ds);
    work = std::move(std_pair.first);
    scaling = std::move(std_pair.second);
  } else {
    work = ds;
    scaling = identity_scaling(ds.p);
  }

  const int p = work.p;
  const Eigen::VectorXd score0 = score_hessian(work, Eigen::VectorXd::Zero(p), {}).score;
  const double smax = score0.cwiseAbs().maxCoeff();
  if (smax <= 0.0)
    throw ParameterError("score at zero vanishes in every coordinate; no penalized path exists");
  const double lmax = smax / opts.alpha;

  std::vector<double> lambdas;
  if (!opts.lambda_path.empty()) {
    lambdas = opts.lambda_path;
    for (double l : lambdas)
      if (!(l > 0.0)) throw ParameterError("user lambda values must be positive");
  } else {
    lambdas = make_grid(lmax, opts.grid);
  }

  PathSolution sol;
  sol.scaling = scaling;
  sol.lambda_max = lmax;
  sol.p = p;
  sol.dev_null = deviance(work, Eigen::VectorXd::Zero(p)).null_value;

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd s_prev = score0;
  double l_prev = lmax;
  std::vector<int> ever_active;
  constexpr int max_repairs = 30;

  for (double lambda : lambdas) {
    PenaltyConfig cfg = opts.control;
    cfg.alpha = opts.alpha;
    cfg.lambda = lambda;
    cfg.kkt_target = 0.5 * opts.kkt_tol * lambda * opts.alpha;

    std::vector<int> ws;
    if (opts.screen) {
      ws = strong_set(s_prev, l_prev, lambda, opts.alpha, ever_active);
    } else {
      ws.resize(static_cast<std::size_t>(p));
      for (int j = 0; j < p; ++j) ws[static_cast<std::size_t>(j)] = j;
    }
    const int strong_size = static_cast<int>(ws.size());

    bool converged = true;
    int first_violation_count = -1;
    double neg_loglik = 0.0;
    Eigen::VectorXd score = s_prev;  // valid at the warm start; refreshed per solve
    try {
      for (int repair = 0;; ++repair) {
        NewtonResult res = newton_solve(work, beta, ws, cfg, &score);
        beta = res.beta;
        score = res.score;
        converged = res.converged;
        neg_loglik = res.objective - penalty_value(beta, lambda, opts.alpha);
        std::vector<int> violators =
            kkt_check(score, beta, lambda, opts.alpha, opts.kkt_tol);
        if (first_violation_count < 0)
          first_violation_count = static_cast<int>(violators.size());
        if (violators.empty() || !converged) break;
        if (repair >= max_repairs) {
          converged = false;
          break;
        }
        std::set<int> merged(ws.begin(), ws.end());
        merged.insert(violators.begin(), violators.end());
        ws.assign(merged.begin(), merged.end());
      }
    } catch (const ConvergenceError& e) {
      beta = e.last_iterate();
      score = score_hessian(work, beta, {}).score;
      neg_loglik = -log_cond_likelihood(work, beta);
      converged = false;
      if (first_violation_count < 0)
        first_violation_count =
            static_cast<int>(kkt_check(score, beta, lambda, opts.alpha, opts.kkt_tol).size());
    }

    for (int j = 0; j < p; ++j)
      if (beta[j] != 0.0 &&
          !std::binary_search(ever_active.begin(), ever_active.end(), j)) {
        ever_active.insert(
            std::lower_bound(ever_active.begin(), ever_active.end(), j), j);
      }

    // The solver's objective already carries the log likelihood, so the
    // deviance falls out without another recursion pass.
    const double dev_explained =
        sol.dev_null > 0.0 ? (sol.dev_null - 2.0 * neg_loglik) / sol.dev_null : 0.0;
    sol.lambdas.push_back(lambda);
    sol.betas.push_back(SparseCoefs::from_dense(beta));
    sol.df.push_back(sol.betas.back().df());
    sol.dev_explained.push_back(dev_explained);
    sol.strong_sizes.push_back(strong_size);
    sol.kkt_violations.push_back(first_violation_count);
    sol.converged.push_back(converged);

    s_prev = score;
    l_prev = lambda;

    if (opts.early_stop && dev_explained >= opts.dev_cutoff) break;
  }
  return sol;
}

}  // namespace clogit
