#include "clogit/cv.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <set>

#include "clogit/rng.hpp"

namespace clogit {

FoldAssignment make_folds(const Dataset& ds, int nfolds, std::uint64_t seed) {
  const int K = ds.n_strata();
  if (nfolds < 2) throw ParameterError("cross-validation needs at least 2 folds");
  if (nfolds > K)
    throw ParameterError("cannot make " + std::to_string(nfolds) + " folds from " +
                         std::to_string(K) + " strata");
  std::vector<int> order(static_cast<std::size_t>(K));
  std::iota(order.begin(), order.end(), 0);
  Rng gen(seed);
  for (int i = K - 1; i > 0; --i) {
    const auto j = static_cast<int>(gen.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  FoldAssignment fa;
  fa.nfolds = nfolds;
  fa.seed = seed;
  fa.fold_of_stratum.resize(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i)
    fa.fold_of_stratum[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i % nfolds;
  return fa;
}

CVResult cross_validate(const Dataset& ds, const PathOptions& opts, const FoldAssignment& folds,
                        int threads, std::vector<std::string>* warnings) {
  ds.validate();
  const int K = ds.n_strata();
  if (static_cast<int>(folds.fold_of_stratum.size()) != K)
    throw ParameterError("fold assignment does not cover the dataset");

  CVResult res;
  res.master = fit_path(ds, opts);
  res.lambdas = res.master.lambdas;
  const int L = static_cast<int>(res.lambdas.size());
  const int F = folds.nfolds;

  PathOptions fold_opts = opts;
  fold_opts.lambda_path = res.lambdas;  // shared grid fixed by the master fit
  fold_opts.early_stop = false;

  res.per_fold =
      Eigen::MatrixXd::Constant(F, L, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> fold_errors(static_cast<std::size_t>(F));

  auto run_fold = [&](int f) {
    Dataset train;
    train.p = ds.p;
    train.names = ds.names;
    std::vector<int> held_out;
    for (int k = 0; k < K; ++k) {
      if (folds.fold_of_stratum[static_cast<std::size_t>(k)] == f)
        held_out.push_back(k);
      else
        train.strata.push_back(ds.strata[static_cast<std::size_t>(k)]);
    }
    try {
      const PathSolution sol = fit_path(train, fold_opts);
      for (int l = 0; l < L; ++l) {
        const Eigen::VectorXd beta = sol.beta_original(l);
        double contrib = 0.0;
        for (int k : held_out)
          contrib += stratum_loglik(ds.strata[static_cast<std::size_t>(k)], beta);
        res.per_fold(f, l) = contrib;
      }
    } catch (const Error& e) {
      fold_errors[static_cast<std::size_t>(f)] = e.what();
    }
  };

  if (threads <= 1) {
    for (int f = 0; f < F; ++f) run_fold(f);
  } else {
    std::vector<std::future<void>> futs;
    std::atomic<int> next{0};
    const int nworkers = std::min(threads, F);
    for (int w = 0; w < nworkers; ++w)
      futs.push_back(std::async(std::launch::async, [&] {
        for (int f = next.fetch_add(1); f < F; f = next.fetch_add(1)) run_fold(f);
      }));
    for (auto& fu : futs) fu.get();
  }

  std::vector<int> kept;
  for (int f = 0; f < F; ++f) {
    if (fold_errors[static_cast<std::size_t>(f)].empty()) {
      kept.push_back(f);
    } else if (warnings) {
      warnings->push_back("fold " + std::to_string(f) +
                          " dropped: " + fold_errors[static_cast<std::size_t>(f)]);
    }
  }
  res.folds_used = static_cast<int>(kept.size());
  if (res.folds_used < 2)
    throw ConvergenceError("fewer than 2 cross-validation folds survived",
                           Eigen::VectorXd::Zero(ds.p));

  res.cv_mean.resize(static_cast<std::size_t>(L));
  res.cv_se.resize(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    double sum = 0.0;
    for (int f : kept) sum += -res.per_fold(f, l);
    const double mean = sum / res.folds_used;
    double ss = 0.0;
    for (int f : kept) {
      const double d = -res.per_fold(f, l) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / (res.folds_used - 1));
    res.cv_mean[static_cast<std::size_t>(l)] = mean;
    res.cv_se[static_cast<std::size_t>(l)] = sd / std::sqrt(static_cast<double>(res.folds_used));
  }

  res.index_min = 0;
  for (int l = 1; l < L; ++l)
    if (res.cv_mean[static_cast<std::size_t>(l)] <
        res.cv_mean[static_cast<std::size_t>(res.index_min)])
      res.index_min = l;
  const double cutoff = res.cv_mean[static_cast<std::size_t>(res.index_min)] +
                        res.cv_se[static_cast<std::size_t>(res.index_min)];
  res.index_1se = res.index_min;
  for (int l = 0; l <= res.index_min; ++l)
    if (res.cv_mean[static_cast<std::size_t>(l)] <= cutoff) {
      res.index_1se = l;
      break;
    }
  res.lambda_min = res.lambdas[static_cast<std::size_t>(res.index_min)];
  res.lambda_1se = res.lambdas[static_cast<std::size_t>(res.index_1se)];
  return res;
}

ThresholdSet stratum_thresholds(const Dataset& ds, const Eigen::VectorXd& beta) {
  if (!beta.allFinite()) throw ParameterError("threshold search needs a finite beta");
  ThresholdSet out;
  for (const auto& st : ds.strata) {
    const Eigen::VectorXd eta = st.X * beta;
    const double lo = eta.minCoeff();
    const double hi = eta.maxCoeff();
    if (lo == hi) {
      out.t.push_back(lo);
      out.misclass.push_back(std::min(st.m, st.n - st.m));
      out.degenerate.push_back(true);
      continue;
    }
    std::vector<double> cand(eta.data(), eta.data() + eta.size());
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    double best_t = cand.front();
    int best_err = st.n + 1;
    for (double t : cand) {
      int err = 0;
      for (int i = 0; i < st.n; ++i) {
        const bool pred_case = eta[i] > t;
        const bool is_case = i < st.m;
        if (pred_case != is_case) ++err;
      }
      if (err < best_err) {
        best_err = err;
        best_t = t;
      }
    }
    out.t.push_back(best_t);
    out.misclass.push_back(best_err);
    out.degenerate.push_back(false);
  }
  return out;
}

std::vector<int> predict(const Eigen::MatrixXd& newX, const Eigen::VectorXd& beta,
                         const ThresholdSet& thr, PredictMethod method) {
  if (thr.t.empty()) throw ParameterError("prediction needs at least one threshold");
  if (newX.cols() != beta.size())
    throw ParameterError("prediction rows do not match the coefficient length");
  const Eigen::VectorXd eta = newX * beta;
  std::vector<int> labels(static_cast<std::size_t>(newX.rows()));
  const double tbar =
      std::accumulate(thr.t.begin(), thr.t.end(), 0.0) / static_cast<double>(thr.t.size());
  for (Eigen::Index r = 0; r < newX.rows(); ++r) {
    bool is_case;
    if (method == PredictMethod::mean) {
      is_case = eta[r] > tbar;
    } else {
      std::size_t votes = 0;
      for (double t : thr.t)
        if (eta[r] > t) ++votes;
      is_case = 2 * votes > thr.t.size();  // even split predicts control
    }
    labels[static_cast<std::size_t>(r)] = is_case ? 1 : 0;
  }
  return labels;
}

RocCurve roc_points(const PathSolution& path, const std::vector<int>& true_support) {
  if (true_support.empty())
    throw ParameterError("ROC sensitivity is undefined for an empty true support");
  const std::set<int> truth(true_support.begin(), true_support.end());
  const int n_zero = path.p - static_cast<int>(truth.size());

  RocCurve rc;
  for (const auto& sc : path.betas) {
    int tp = 0;
    int fp = 0;
    for (int j : sc.index)
      if (truth.count(j))
        ++tp;
      else
        ++fp;
    rc.sensitivity.push_back(static_cast<double>(tp) / static_cast<double>(truth.size()));
    rc.specificity.push_back(
        n_zero > 0 ? static_cast<double>(n_zero - fp) / static_cast<double>(n_zero) : 1.0);
  }

  std::vector<std::size_t> order(rc.sensitivity.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rc.sensitivity[a] < rc.sensitivity[b];
  });
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = rc.sensitivity[order[i]];
    double acc = 0.0;
    std::size_t cnt = 0;
    while (i < order.size() && rc.sensitivity[order[i]] == s) {
      acc += rc.specificity[order[i]];
      ++cnt;
      ++i;
    }
    rc.avg_sensitivity.push_back(s);
    rc.avg_specificity.push_back(acc / static_cast<double>(cnt));
  }
  return rc;
}

}  // namespace clogit
