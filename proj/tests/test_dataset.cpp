#include <string>
#include <vector>

#include "clogit/dataset.hpp"
#include "clogit/rng.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace clogit;

namespace {

InputRow row(const std::string& stratum, bool is_case, std::vector<double> x) {
  InputRow r;
  r.stratum = stratum;
  r.is_case = is_case;
  r.x = std::move(x);
  return r;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("five rows with one case become a single 1:4 stratum, case first") {
  std::vector<InputRow> rows;
  rows.push_back(row("a", false, {1.0}));
  rows.push_back(row("a", false, {2.0}));
  rows.push_back(row("a", true, {3.0}));
  rows.push_back(row("a", false, {4.0}));
  rows.push_back(row("a", false, {5.0}));
  const Dataset ds = build_dataset(rows);
  REQUIRE(ds.n_strata() == 1);
  CHECK(ds.strata[0].n == 5);
  CHECK(ds.strata[0].m == 1);
  CHECK(ds.p == 1);
  CHECK(ds.strata[0].X(0, 0) == 3.0);  // the case leads
  // controls keep input order behind it
  CHECK(ds.strata[0].X(1, 0) == 1.0);
  CHECK(ds.strata[0].X(4, 0) == 5.0);
  CHECK(ds.n_rows() == 5);
}

TEST_CASE("a stratum with no cases is dropped with a warning") {
  std::vector<InputRow> rows;
  rows.push_back(row("keep", true, {1.0}));
  rows.push_back(row("keep", false, {0.0}));
  rows.push_back(row("drop", false, {1.0}));
  rows.push_back(row("drop", false, {2.0}));
  std::vector<std::string> warnings;
  const Dataset ds = build_dataset(rows, {}, &warnings);
  CHECK(ds.n_strata() == 1);
  CHECK(ds.strata[0].id == "keep");
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("drop") != std::string::npos);
}

TEST_CASE("a stratum with no controls is dropped too") {
  std::vector<InputRow> rows;
  rows.push_back(row("allcase", true, {1.0}));
  rows.push_back(row("allcase", true, {2.0}));
  rows.push_back(row("ok", true, {1.0}));
  rows.push_back(row("ok", false, {2.0}));
  std::vector<std::string> warnings;
  const Dataset ds = build_dataset(rows, {}, &warnings);
  CHECK(ds.n_strata() == 1);
  CHECK(warnings.size() == 1);
}

TEST_CASE("all strata degenerate is a format error") {
  std::vector<InputRow> rows;
  rows.push_back(row("a", true, {1.0}));
  rows.push_back(row("b", false, {1.0}));
  CHECK_THROWS_AS(build_dataset(rows), FormatError);
}

TEST_CASE("ragged rows are rejected with the offending row number") {
  std::vector<InputRow> rows;
  rows.push_back(row("a", true, {1.0, 2.0}));
  rows.push_back(row("a", false, {1.0}));
  try {
    build_dataset(rows);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("63 strata of five rows, one case each") {
  std::vector<InputRow> rows;
  Rng rng(11);
  for (int k = 0; k < 63; ++k) {
    for (int i = 0; i < 5; ++i)
      rows.push_back(row("g" + std::to_string(k), i == 2, {rng.normal(), rng.normal()}));
  }
  const Dataset ds = build_dataset(rows);
  REQUIRE(ds.n_strata() == 63);
  CHECK(ds.n_rows() == 315);
  for (const auto& st : ds.strata) {
    CHECK(st.n == 5);
    CHECK(st.m == 1);
  }
  CHECK_NOTHROW(ds.validate());
}

TEST_CASE("strata keep first-appearance order even when rows interleave") {
  std::vector<InputRow> rows;
  rows.push_back(row("b", true, {1.0}));
  rows.push_back(row("a", true, {2.0}));
  rows.push_back(row("b", false, {3.0}));
  rows.push_back(row("a", false, {4.0}));
  const Dataset ds = build_dataset(rows);
  REQUIRE(ds.n_strata() == 2);
  CHECK(ds.strata[0].id == "b");
  CHECK(ds.strata[1].id == "a");
}

TEST_CASE("permuting rows within a stratum leaves counts and row sets unchanged") {
  std::vector<InputRow> base;
  base.push_back(row("a", false, {1.0, 10.0}));
  base.push_back(row("a", true, {2.0, 20.0}));
  base.push_back(row("a", false, {3.0, 30.0}));
  base.push_back(row("a", true, {4.0, 40.0}));
  std::vector<InputRow> shuffled = {base[3], base[0], base[1], base[2]};
  const Dataset d1 = build_dataset(base);
  const Dataset d2 = build_dataset(shuffled);
  REQUIRE(d1.n_strata() == 1);
  REQUIRE(d2.n_strata() == 1);
  CHECK(d1.strata[0].n == d2.strata[0].n);
  CHECK(d1.strata[0].m == d2.strata[0].m);
  // same case rows and control rows as sets; order within each group follows input
  auto sorted_col = [](const Eigen::MatrixXd& X, int from, int to) {
    std::vector<double> v;
    for (int i = from; i < to; ++i) v.push_back(X(i, 0));
    std::sort(v.begin(), v.end());
    return v;
  };
  CHECK(sorted_col(d1.strata[0].X, 0, 2) == sorted_col(d2.strata[0].X, 0, 2));
  CHECK(sorted_col(d1.strata[0].X, 2, 4) == sorted_col(d2.strata[0].X, 2, 4));
}

TEST_CASE("standardize centers and scales by the population convention") {
  // column with values 0 and 2: mean 1, population sd 1
  std::vector<InputRow> rows;
  rows.push_back(row("a", true, {0.0}));
  rows.push_back(row("a", false, {2.0}));
  auto [std_ds, info] = standardize(build_dataset(rows));
  CHECK(info.center[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(info.scale[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std_ds.strata[0].X(0, 0) == doctest::Approx(-1.0));
  CHECK(std_ds.strata[0].X(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("standardize is idempotent") {
  Rng rng(3);
  const Dataset ds = testutil::random_dataset(rng, 4, 6, 2, 5);
  auto [once, info1] = standardize(ds);
  auto [twice, info2] = standardize(once);
  for (int k = 0; k < once.n_strata(); ++k)
    CHECK((once.strata[k].X - twice.strata[k].X).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(info2.center.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((info2.scale.array() - 1.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("pooled moments after standardization are 0 and 1") {
  Rng rng(5);
  const Dataset ds = testutil::random_dataset(rng, 6, 5, 2, 4);
  auto [std_ds, info] = standardize(ds);
  const int N = ds.n_rows();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(ds.p);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(ds.p);
  for (const auto& st : std_ds.strata) {
    mean += st.X.colwise().sum().transpose();
    sq += st.X.array().square().matrix().colwise().sum().transpose();
  }
  mean /= N;
  sq /= N;
  CHECK(mean.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((sq - mean.cwiseAbs2() - Eigen::VectorXd::Ones(ds.p)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("zero-variance columns are excluded and zeroed") {
  std::vector<InputRow> rows;
  rows.push_back(row("a", true, {1.0, 7.0}));
  rows.push_back(row("a", false, {2.0, 7.0}));
  auto [std_ds, info] = standardize(build_dataset(rows));
  REQUIRE(info.excluded.size() == 2);
  CHECK_FALSE(info.excluded[0]);
  CHECK(info.excluded[1]);
  CHECK(info.n_excluded() == 1);
  CHECK(info.scale[1] == 1.0);
  CHECK(std_ds.strata[0].X(0, 1) == 0.0);
  CHECK(std_ds.strata[0].X(1, 1) == 0.0);
}

TEST_CASE("to_original divides by the column scale") {
  std::vector<InputRow> rows;
  rows.push_back(row("a", true, {0.0, 5.0}));
  rows.push_back(row("a", false, {4.0, -5.0}));
  auto [std_ds, info] = standardize(build_dataset(rows));
  Eigen::VectorXd beta_std(2);
  beta_std << 3.0, 1.0;
  const Eigen::VectorXd orig = info.to_original(beta_std);
  CHECK(orig[0] == doctest::Approx(3.0 / info.scale[0]).epsilon(1e-15));
  CHECK(orig[1] == doctest::Approx(1.0 / info.scale[1]).epsilon(1e-15));
}

TEST_CASE("identity scaling round-trips any coefficient vector") {
  const ScalingInfo id = identity_scaling(3);
  Eigen::VectorXd b(3);
  b << 1.0, -2.0, 0.5;
  CHECK((id.to_original(b) - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK(id.n_excluded() == 0);
}

}  // TEST_SUITE
