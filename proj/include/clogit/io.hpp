#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "clogit/cv.hpp"
#include "clogit/dataset.hpp"
#include "clogit/path.hpp"
#include "clogit/simulate.hpp"

namespace clogit {

// Delimited text with a header row: stratum, y, then p predictor columns.
// Missing or non-numeric values reject the row with its line number.
Dataset parse_dataset_csv(std::istream& in, const std::string& origin,
                          std::vector<std::string>* warnings = nullptr);
Dataset read_dataset_csv(const std::string& path, std::vector<std::string>* warnings = nullptr);
void write_dataset_csv(const Dataset& ds, std::ostream& out);

// Versioned line-delimited path file: one record per lambda with df,
// deviance explained, screening diagnostics, and sparse 1-based
// (index:value) coefficient pairs on the original predictor scale.
void write_path_file(const PathSolution& sol, const std::vector<std::string>& names,
                     std::ostream& out);

struct PathFile {
  PathSolution sol;  // coefficients on the original scale, identity scaling
  std::vector<std::string> names;
};
PathFile parse_path_file(std::istream& in, const std::string& origin);
PathFile read_path_file(const std::string& path);

void write_cv_file(const CVResult& cv, std::ostream& out);

void write_truth_file(const SimulatedData& sim, std::ostream& out);

struct TruthFile {
  int p = 0;
  Eigen::VectorXd beta;
  std::vector<int> support;  // 0-based, sorted
  Eigen::VectorXd intercepts;
};
TruthFile parse_truth_file(std::istream& in, const std::string& origin);
TruthFile read_truth_file(const std::string& path);

void write_roc_file(const RocCurve& rc, const std::vector<double>& lambdas, std::ostream& out);

// Tidy (lambda, predictor, coefficient) triples for every predictor that is
// nonzero anywhere along the path.
void write_plot_data(const PathFile& pf, std::ostream& out);

std::ofstream open_output(const std::string& path);
std::ifstream open_input(const std::string& path);

// 17 significant digits; round-trips a double exactly.
std::string format_double(double v);

}  // namespace clogit
