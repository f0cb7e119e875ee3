#include "clogit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "clogit/errors.hpp"
#include "clogit/rng.hpp"

namespace clogit {

namespace {

enum Stream : std::uint64_t {
  regressors = 1,
  support = 2,
  signs = 3,
  intercepts = 4,
  sampling = 5,
};

}  // namespace

int SimConfig::support_size() const {
  switch (support_rule) {
    case SupportRule::quarter:
      return p / 4;
    case SupportRule::tenth:
      return p / 10;
    case SupportRule::explicit_q:
      return q;
  }
  return 0;
}

void SimConfig::validate() const {
  if (K < 1) throw ParameterError("simulation needs at least one stratum");
  if (p < 1) throw ParameterError("simulation needs at least one predictor");
  if (m < 1 || m >= n) throw ParameterError("cases per stratum must satisfy 1 <= m < n");
  const int nz = support_size();
  if (nz < 0 || nz > p) throw ParameterError("support size must lie in [0, p]");
  if (intercept_sd < 0.0) throw ParameterError("intercept sd must be nonnegative");
}

SimulatedData simulate(const SimConfig& cfg) {
  cfg.validate();
  const int nz = cfg.support_size();

  SimulatedData out;
  out.data.p = cfg.p;
  out.data.names.reserve(static_cast<std::size_t>(cfg.p));
  for (int j = 1; j <= cfg.p; ++j) out.data.names.push_back("x" + std::to_string(j));

  Rng x_rng(cfg.seed, Stream::regressors);
  std::vector<Eigen::MatrixXd> X(static_cast<std::size_t>(cfg.K));
  for (int k = 0; k < cfg.K; ++k) {
    auto& Xk = X[static_cast<std::size_t>(k)];
    Xk.resize(cfg.n, cfg.p);
    for (int i = 0; i < cfg.n; ++i)
      for (int j = 0; j < cfg.p; ++j) Xk(i, j) = x_rng.normal();
  }

  // partial Fisher-Yates: first nz entries form the uniform support draw
  Rng s_rng(cfg.seed, Stream::support);
  std::vector<int> perm(static_cast<std::size_t>(cfg.p));
  for (int j = 0; j < cfg.p; ++j) perm[static_cast<std::size_t>(j)] = j;
  for (int i = 0; i < nz; ++i) {
    const auto j = i + static_cast<int>(
                           s_rng.below(static_cast<std::uint64_t>(cfg.p - i)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  out.support.assign(perm.begin(), perm.begin() + nz);
  std::sort(out.support.begin(), out.support.end());

  Rng sign_rng(cfg.seed, Stream::signs);
  out.true_beta = Eigen::VectorXd::Zero(cfg.p);
  for (int j : out.support)
    out.true_beta[j] = (sign_rng.below(2) == 0 ? 1.0 : -1.0) * cfg.coef_magnitude;

  Rng b0_rng(cfg.seed, Stream::intercepts);
  out.intercepts.resize(cfg.K);
  for (int k = 0; k < cfg.K; ++k)
    out.intercepts[k] = cfg.intercept_sd > 0.0 ? cfg.intercept_sd * b0_rng.normal() : 0.0;

  Rng pick_rng(cfg.seed, Stream::sampling);
  for (int k = 0; k < cfg.K; ++k) {
    const auto& Xk = X[static_cast<std::size_t>(k)];
    const Eigen::VectorXd eta = Xk * out.true_beta;
    Eigen::VectorXd w(cfg.n);
    for (int i = 0; i < cfg.n; ++i)
      w[i] = 1.0 / (1.0 + std::exp(-(out.intercepts[k] + eta[i])));

    // draw one index proportional to weight, remove it, repeat
    std::vector<int> pool(static_cast<std::size_t>(cfg.n));
    for (int i = 0; i < cfg.n; ++i) pool[static_cast<std::size_t>(i)] = i;
    std::vector<int> cases;
    for (int draw = 0; draw < cfg.m; ++draw) {
      double total = 0.0;
      for (int i : pool) total += w[i];
      const double u = pick_rng.uniform() * total;
      double acc = 0.0;
      std::size_t chosen = pool.size() - 1;
      for (std::size_t idx = 0; idx < pool.size(); ++idx) {
        acc += w[pool[idx]];
        if (u < acc) {
          chosen = idx;
          break;
        }
      }
      cases.push_back(pool[chosen]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(chosen));
    }
    std::sort(cases.begin(), cases.end());

    Stratum st;
    st.id = "s" + std::to_string(k + 1);
    st.n = cfg.n;
    st.m = cfg.m;
    st.X.resize(cfg.n, cfg.p);
    int row = 0;
    for (int i : cases) st.X.row(row++) = Xk.row(i);
    for (int i : pool) st.X.row(row++) = Xk.row(i);
    out.data.strata.push_back(std::move(st));
  }

  return out;
}

}  // namespace clogit
