#include "clogit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace clogit {

int Dataset::n_rows() const {
  int total = 0;
  for (const auto& st : strata) total += st.n;
  return total;
}

void Dataset::validate() const {
  if (strata.empty()) throw FormatError("dataset has no strata");
  if (p <= 0) throw FormatError("dataset has no predictors");
  for (const auto& st : strata) {
    if (st.X.rows() != st.n || st.X.cols() != p)
      throw FormatError("stratum '" + st.id + "': regressor matrix shape mismatch");
    if (st.m < 1 || st.m >= st.n)
      throw FormatError("stratum '" + st.id + "': needs at least one case and one control");
  }
  if (!names.empty() && static_cast<int>(names.size()) != p)
    throw FormatError("predictor name count does not match p");
}

Dataset build_dataset(const std::vector<InputRow>& rows,
                      std::vector<std::string> names,
                      std::vector<std::string>* warnings) {
  if (rows.empty()) throw FormatError("no input rows");
  const int p = static_cast<int>(rows.front().x.size());
  if (p == 0) throw FormatError("rows carry no predictor values");

  // Group row indices by stratum label, first-appearance order.
  std::unordered_map<std::string, int> slot;
  std::vector<std::string> labels;
  std::vector<std::vector<int>> members;
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    if (static_cast<int>(rows[r].x.size()) != p)
      throw FormatError("row " + std::to_string(r + 1) + ": expected " + std::to_string(p) +
                        " predictor values, got " + std::to_string(rows[r].x.size()));
    auto [it, inserted] = slot.try_emplace(rows[r].stratum, static_cast<int>(labels.size()));
    if (inserted) {
      labels.push_back(rows[r].stratum);
      members.emplace_back();
    }
    members[it->second].push_back(r);
  }

  Dataset ds;
  ds.p = p;
  ds.names = std::move(names);
  for (std::size_t g = 0; g < labels.size(); ++g) {
    const auto& idx = members[g];
    int m = 0;
    for (int r : idx) m += rows[r].is_case ? 1 : 0;
    const int n = static_cast<int>(idx.size());
    if (m == 0 || m == n) {
      if (warnings)
        warnings->push_back("stratum '" + labels[g] + "' dropped: " +
                            (m == 0 ? "no cases" : "no controls") +
                            " (likelihood contribution is constant)");
      continue;
    }
    Stratum st;
    st.id = labels[g];
    st.n = n;
    st.m = m;
    st.X.resize(n, p);
    int out = 0;
    for (int pass = 0; pass < 2; ++pass) {  // cases first, both passes keep input order
      for (int r : idx) {
        if (rows[r].is_case == (pass == 0)) {
          for (int j = 0; j < p; ++j) st.X(out, j) = rows[r].x[j];
          ++out;
        }
      }
    }
    ds.strata.push_back(std::move(st));
  }
  if (ds.strata.empty())
    throw FormatError("all strata are degenerate (no stratum has both cases and controls)");
  ds.validate();
  return ds;
}

int ScalingInfo::n_excluded() const {
  return static_cast<int>(std::count(excluded.begin(), excluded.end(), true));
}

Eigen::VectorXd ScalingInfo::to_original(const Eigen::VectorXd& beta_std) const {
  return beta_std.cwiseQuotient(scale);
}

ScalingInfo identity_scaling(int p) {
  ScalingInfo info;
  info.center = Eigen::VectorXd::Zero(p);
  info.scale = Eigen::VectorXd::Ones(p);
  info.excluded.assign(static_cast<std::size_t>(p), false);
  return info;
}

std::pair<Dataset, ScalingInfo> standardize(const Dataset& ds) {
  ds.validate();
  const int p = ds.p;
  const double n_total = static_cast<double>(ds.n_rows());

  Eigen::VectorXd center = Eigen::VectorXd::Zero(p);
  for (const auto& st : ds.strata) center += st.X.colwise().sum().transpose();
  center /= n_total;

  Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(p);
  for (const auto& st : ds.strata)
    sumsq += (st.X.rowwise() - center.transpose()).array().square().colwise().sum().matrix().transpose();
  Eigen::VectorXd sd = (sumsq / n_total).cwiseSqrt();

  ScalingInfo info;
  info.center = center;
  info.scale = Eigen::VectorXd::Ones(p);
  info.excluded.assign(static_cast<std::size_t>(p), false);
  for (int j = 0; j < p; ++j) {
    if (sd[j] <= 1e-12 * std::max(1.0, std::abs(center[j])))
      info.excluded[j] = true;
    else
      info.scale[j] = sd[j];
  }

  Dataset out = ds;
  for (auto& st : out.strata) {
    st.X.rowwise() -= center.transpose();
    for (int j = 0; j < p; ++j) {
      if (info.excluded[j])
        st.X.col(j).setZero();
      else
        st.X.col(j) /= info.scale[j];
    }
  }
  return {std::move(out), std::move(info)};
}

}  // namespace clogit
