#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "clogit/likelihood.hpp"
#include "clogit/path.hpp"
#include "clogit/rng.hpp"
#include "clogit/simulate.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace clogit;

namespace {

Dataset unit_pair() {
  Dataset ds;
  ds.p = 1;
  Stratum st;
  st.id = "s";
  st.n = 2;
  st.m = 1;
  st.X.resize(2, 1);
  st.X << 1.0, 0.0;
  ds.strata.push_back(st);
  return ds;
}

std::set<int> active_set(const SparseCoefs& sc) {
  return std::set<int>(sc.index.begin(), sc.index.end());
}

}  // namespace

TEST_SUITE("path") {

TEST_CASE("lambda_max scales inversely with alpha") {
  const Dataset ds = unit_pair();
  CHECK(lambda_max(ds, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(lambda_max(ds, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("a vanishing score at zero has no path") {
  Dataset ds;
  ds.p = 1;
  Stratum st;
  st.id = "s";
  st.n = 2;
  st.m = 1;
  st.X.resize(2, 1);
  st.X << 1.0, 1.0;  // case and control identical: score is 0
  ds.strata.push_back(st);
  CHECK_THROWS_AS(lambda_max(ds, 1.0), ParameterError);
}

TEST_CASE("three-point grids hit the documented values") {
  GridSpec spec;
  spec.nlambda = 3;
  spec.epsilon = 0.01;

  spec.kind = GridSpec::Kind::logarithmic;
  const std::vector<double> lg = make_grid(1.0, spec);
  REQUIRE(lg.size() == 3);
  CHECK(lg[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lg[1] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(lg[2] == doctest::Approx(0.01).epsilon(1e-12));

  spec.kind = GridSpec::Kind::linear;
  const std::vector<double> ln = make_grid(1.0, spec);
  REQUIRE(ln.size() == 3);
  CHECK(ln[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ln[1] == doctest::Approx(0.505).epsilon(1e-12));
  CHECK(ln[2] == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("hybrid grid: equal gaps then equal ratios, exact endpoint") {
  GridSpec spec;
  spec.kind = GridSpec::Kind::hybrid;
  spec.nlambda = 100;
  spec.epsilon = 1e-5;
  spec.linear_steps = 90;
  const std::vector<double> g = make_grid(2.0, spec);
  REQUIRE(g.size() == 100);
  CHECK(g[0] == 2.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] < g[i - 1]);

  const double gap = g[0] - g[1];
  for (int i = 1; i <= 90; ++i)
    CHECK(g[i - 1] - g[i] == doctest::Approx(gap).epsilon(1e-12));
  const double ratio = g[91] / g[90];
  for (int i = 91; i < 100; ++i)
    CHECK(g[i] / g[i - 1] == doctest::Approx(ratio).epsilon(1e-12));
  CHECK(g[90] == doctest::Approx(0.1 * 2.0).epsilon(1e-12));
  CHECK(g.back() == doctest::Approx(1e-5 * 2.0).epsilon(1e-12));
}

TEST_CASE("all grid kinds end exactly at epsilon times lambda_max") {
  for (auto kind :
       {GridSpec::Kind::logarithmic, GridSpec::Kind::linear, GridSpec::Kind::hybrid}) {
    GridSpec spec;
    spec.kind = kind;
    spec.nlambda = 37;
    spec.epsilon = 1e-4;
    spec.linear_steps = 20;
    const std::vector<double> g = make_grid(3.7, spec);
    REQUIRE(static_cast<int>(g.size()) == 37);
    CHECK(std::abs(g.back() - 1e-4 * 3.7) <= 1e-12 * 3.7);
    CHECK(g.front() == 3.7);
  }
}

TEST_CASE("strong rule keeps high scores and every previously active coordinate") {
  Eigen::VectorXd s(2);
  s << 0.9, 0.1;
  const std::vector<int> kept = strong_set(s, 0.6, 0.5, 1.0, {});
  REQUIRE(kept.size() == 1);
  CHECK(kept[0] == 0);  // threshold 2*0.5 - 0.6 = 0.4 keeps only |s| > 0.4

  const std::vector<int> with_active = strong_set(s, 0.6, 0.5, 1.0, {1});
  CHECK(with_active == std::vector<int>{0, 1});
}

TEST_CASE("a nonpositive strong threshold keeps every coordinate") {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(5);
  const std::vector<int> kept = strong_set(s, 0.6, 0.2, 1.0, {});
  CHECK(kept == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("kkt check flags only genuine violations") {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd s(3);
  s << 0.05, -0.03, 0.0;
  CHECK(kkt_check(s, beta, 0.1, 1.0, 1e-4).empty());

  s << 0.2, 0.0, 0.0;
  const std::vector<int> v = kkt_check(s, beta, 0.1, 1.0, 1e-4);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == 0);
}

TEST_CASE("converged solutions are clean on their own working set") {
  Rng rng(70);
  const Dataset ds = testutil::random_dataset(rng, 5, 6, 3, 10);
  std::vector<int> ws(10);
  for (int j = 0; j < 10; ++j) ws[j] = j;
  PenaltyConfig cfg;
  cfg.lambda = 0.25 * lambda_max(ds, 1.0);
  const NewtonResult res = newton_solve(ds, Eigen::VectorXd::Zero(10), ws, cfg);
  REQUIRE(res.converged);
  const std::vector<int> v = kkt_check(res.score, res.beta, cfg.lambda, 1.0, 1e-4);
  CHECK(v.empty());
}

TEST_CASE("path structure on a simulated design") {
  SimConfig cfg;
  cfg.K = 10;
  cfg.n = 10;
  cfg.m = 5;
  cfg.p = 40;
  cfg.support_rule = SimConfig::SupportRule::quarter;
  cfg.seed = 9;
  const SimulatedData sim = simulate(cfg);

  PathOptions opts;
  opts.grid.nlambda = 40;
  opts.grid.linear_steps = 36;
  opts.grid.epsilon = 1e-3;
  const PathSolution sol = fit_path(sim.data, opts);

  REQUIRE(!sol.lambdas.empty());
  CHECK(sol.lambdas[0] == doctest::Approx(sol.lambda_max).epsilon(1e-14));
  for (std::size_t k = 1; k < sol.lambdas.size(); ++k)
    CHECK(sol.lambdas[k] < sol.lambdas[k - 1]);
  CHECK(sol.betas[0].df() == 0);
  CHECK(sol.df[0] == 0);

  // deviance explained may only grow along the converged portion of the path
  double prev = -1.0;
  for (std::size_t k = 0; k < sol.lambdas.size(); ++k) {
    if (!sol.converged[k]) continue;
    CHECK(sol.dev_explained[k] >= prev - 1e-8);
    prev = sol.dev_explained[k];
    CHECK(sol.dev_explained[k] >= 0.0);
    CHECK(sol.dev_explained[k] <= 1.0 + 1e-12);
    // the recorded strong size predates repair, so only audit clean points
    if (sol.kkt_violations[k] == 0) CHECK(sol.strong_sizes[k] >= sol.df[k]);
  }
}

TEST_CASE("screened and unscreened paths coincide") {
  SimConfig cfg;
  cfg.K = 8;
  cfg.n = 8;
  cfg.m = 4;
  cfg.p = 20;
  cfg.support_rule = SimConfig::SupportRule::quarter;
  cfg.seed = 21;
  const SimulatedData sim = simulate(cfg);

  PathOptions on;
  on.grid.nlambda = 30;
  on.grid.linear_steps = 27;
  on.grid.epsilon = 1e-3;
  PathOptions off = on;
  off.screen = false;

  const PathSolution a = fit_path(sim.data, on);
  const PathSolution b = fit_path(sim.data, off);
  REQUIRE(a.lambdas.size() == b.lambdas.size());
  for (std::size_t k = 0; k < a.lambdas.size(); ++k) {
    const Eigen::VectorXd da = a.beta_std(static_cast<int>(k));
    const Eigen::VectorXd db = b.beta_std(static_cast<int>(k));
    CHECK((da - db).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("every path point passes the full audit after repair") {
  SimConfig cfg;
  cfg.K = 10;
  cfg.n = 10;
  cfg.m = 5;
  cfg.p = 60;
  cfg.support_rule = SimConfig::SupportRule::quarter;
  cfg.seed = 33;
  const SimulatedData sim = simulate(cfg);

  auto [std_ds, info] = standardize(sim.data);
  PathOptions opts;
  opts.standardize = false;
  opts.grid.nlambda = 40;
  opts.grid.linear_steps = 36;
  opts.grid.epsilon = 1e-3;
  const PathSolution sol = fit_path(std_ds, opts);

  for (std::size_t k = 0; k < sol.lambdas.size(); ++k) {
    const Eigen::VectorXd beta = sol.beta_std(static_cast<int>(k));
    const Eigen::VectorXd score = score_hessian(std_ds, beta, {}).score;
    CHECK(kkt_check(score, beta, sol.lambdas[k], opts.alpha, opts.kkt_tol).empty());
  }
}

TEST_CASE("ever-active coordinates survive later screening") {
  SimConfig cfg;
  cfg.K = 10;
  cfg.n = 6;
  cfg.m = 3;
  cfg.p = 30;
  cfg.support_rule = SimConfig::SupportRule::quarter;
  cfg.seed = 12;
  const SimulatedData sim = simulate(cfg);

  PathOptions opts;
  opts.grid.nlambda = 30;
  opts.grid.linear_steps = 27;
  opts.grid.epsilon = 1e-2;
  const PathSolution sol = fit_path(sim.data, opts);

  // once a coordinate leaves the active set it may return to zero, but the
  // strong set size can never fall below the union of past supports
  std::set<int> ever;
  for (std::size_t k = 0; k < sol.lambdas.size(); ++k) {
    const std::set<int> act = active_set(sol.betas[k]);
    ever.insert(act.begin(), act.end());
    if (k > 0) CHECK(sol.strong_sizes[k] >= static_cast<int>(ever.size()));
  }
}

TEST_CASE("separable data stops the path early with high explained deviance") {
  Rng rng(71);
  const Dataset ds = testutil::separable_dataset(rng, 10, 4, 2, 3);
  PathOptions opts;
  opts.grid.nlambda = 100;
  const PathSolution sol = fit_path(ds, opts);
  CHECK(sol.lambdas.size() < 100);
  REQUIRE(!sol.dev_explained.empty());
  CHECK(sol.dev_explained.back() >= 0.99);
}

TEST_CASE("disabling early stop runs the whole grid") {
  Rng rng(72);
  const Dataset ds = testutil::separable_dataset(rng, 6, 4, 2, 2);
  PathOptions opts;
  opts.grid.nlambda = 25;
  opts.grid.linear_steps = 22;
  opts.early_stop = false;
  const PathSolution sol = fit_path(ds, opts);
  CHECK(sol.lambdas.size() == 25);
  CHECK(sol.lambdas.back() ==
        doctest::Approx(opts.grid.epsilon * sol.lambda_max).epsilon(1e-12));
}

TEST_CASE("a user-supplied lambda list overrides the grid") {
  SimConfig cfg;
  cfg.K = 6;
  cfg.n = 6;
  cfg.m = 3;
  cfg.p = 10;
  cfg.support_rule = SimConfig::SupportRule::quarter;
  cfg.seed = 5;
  const SimulatedData sim = simulate(cfg);
  PathOptions opts;
  const double lmax = lambda_max(std::get<0>(standardize(sim.data)), 1.0);
  opts.lambda_path = {lmax, 0.5 * lmax, 0.25 * lmax};
  const PathSolution sol = fit_path(sim.data, opts);
  REQUIRE(sol.lambdas.size() == 3);
  CHECK(sol.lambdas[1] == doctest::Approx(0.5 * lmax).epsilon(1e-14));
}

TEST_CASE("refitting is bitwise reproducible") {
  SimConfig cfg;
  cfg.K = 8;
  cfg.n = 8;
  cfg.m = 4;
  cfg.p = 25;
  cfg.support_rule = SimConfig::SupportRule::quarter;
  cfg.seed = 44;
  const SimulatedData sim = simulate(cfg);
  PathOptions opts;
  opts.grid.nlambda = 30;
  opts.grid.linear_steps = 27;
  const PathSolution a = fit_path(sim.data, opts);
  const PathSolution b = fit_path(sim.data, opts);
  REQUIRE(a.lambdas.size() == b.lambdas.size());
  for (std::size_t k = 0; k < a.lambdas.size(); ++k) {
    CHECK(a.lambdas[k] == b.lambdas[k]);
    REQUIRE(a.betas[k].index == b.betas[k].index);
    for (std::size_t i = 0; i < a.betas[k].value.size(); ++i)
      CHECK(a.betas[k].value[i] == b.betas[k].value[i]);
  }
}

}  // TEST_SUITE
