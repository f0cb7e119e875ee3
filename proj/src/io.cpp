#include "clogit/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace clogit {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == delim) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_double(const std::string& s, double& v) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  v = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size() && std::isfinite(v);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// strips a trailing carriage return so CRLF files parse cleanly
void chomp(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string where(const std::string& origin, int lineno) {
  return origin + ":" + std::to_string(lineno);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

Dataset parse_dataset_csv(std::istream& in, const std::string& origin,
                          std::vector<std::string>* warnings) {
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw FormatError(origin + ": empty input");
  ++lineno;
  chomp(line);
  std::vector<std::string> header = split(line, ',');
  if (header.size() < 3)
    throw FormatError(where(origin, lineno) +
                      ": header needs stratum, y, and at least one predictor column");
  if (lower(trim(header[0])) != "stratum" || lower(trim(header[1])) != "y")
    throw FormatError(where(origin, lineno) + ": header must start with 'stratum,y'");
  const std::size_t width = header.size();
  const int p = static_cast<int>(width) - 2;
  std::vector<std::string> names(header.begin() + 2, header.end());
  for (auto& nm : names) nm = trim(nm);

  std::vector<InputRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    chomp(line);
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != width)
      throw FormatError(where(origin, lineno) + ": expected " + std::to_string(width) +
                        " fields, found " + std::to_string(fields.size()));
    InputRow row;
    row.stratum = trim(fields[0]);
    if (row.stratum.empty())
      throw FormatError(where(origin, lineno) + ": empty stratum label");
    double y;
    if (!parse_double(fields[1], y) || (y != 0.0 && y != 1.0))
      throw FormatError(where(origin, lineno) + ": y must be 0 or 1");
    row.is_case = y == 1.0;
    row.x.resize(p);
    for (int j = 0; j < p; ++j) {
      double v;
      if (!parse_double(fields[static_cast<std::size_t>(j) + 2], v))
        throw FormatError(where(origin, lineno) + ": missing or non-numeric value in column '" +
                          names[static_cast<std::size_t>(j)] + "'");
      row.x[j] = v;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(origin + ": no data rows");
  return build_dataset(rows, names, warnings);
}

Dataset read_dataset_csv(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in = open_input(path);
  return parse_dataset_csv(in, path, warnings);
}

void write_dataset_csv(const Dataset& ds, std::ostream& out) {
  out << "stratum,y";
  for (int j = 0; j < ds.p; ++j) {
    out << ',';
    out << (j < static_cast<int>(ds.names.size()) ? ds.names[static_cast<std::size_t>(j)]
                                                  : "x" + std::to_string(j + 1));
  }
  out << '\n';
  for (const auto& st : ds.strata) {
    for (int i = 0; i < st.n; ++i) {
      out << st.id << ',' << (i < st.m ? 1 : 0);
      for (int j = 0; j < ds.p; ++j) out << ',' << format_double(st.X(i, j));
      out << '\n';
    }
  }
}

void write_path_file(const PathSolution& sol, const std::vector<std::string>& names,
                     std::ostream& out) {
  out << "#clogit-path v1\n";
  out << "#meta p " << sol.p << " lambda_max " << format_double(sol.lambda_max) << " dev_null "
      << format_double(sol.dev_null) << '\n';
  out << "#names";
  for (int j = 0; j < sol.p; ++j)
    out << ' '
        << (j < static_cast<int>(names.size()) ? names[static_cast<std::size_t>(j)]
                                               : "x" + std::to_string(j + 1));
  out << '\n';
  for (std::size_t k = 0; k < sol.lambdas.size(); ++k) {
    const Eigen::VectorXd beta = sol.beta_original(static_cast<int>(k));
    out << format_double(sol.lambdas[k]) << ' ' << sol.df[k] << ' '
        << format_double(sol.dev_explained[k]) << ' ' << sol.strong_sizes[k] << ' '
        << sol.kkt_violations[k] << ' ' << (sol.converged[k] ? 1 : 0);
    for (int j = 0; j < sol.p; ++j)
      if (beta[j] != 0.0) out << ' ' << j + 1 << ':' << format_double(beta[j]);
    out << '\n';
  }
}

PathFile parse_path_file(std::istream& in, const std::string& origin) {
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw FormatError(origin + ": empty input");
  ++lineno;
  chomp(line);
  if (trim(line) != "#clogit-path v1")
    throw FormatError(where(origin, lineno) + ": not a clogit path file");

  PathFile pf;
  pf.sol.p = -1;
  while (std::getline(in, line)) {
    ++lineno;
    chomp(line);
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::istringstream ss(t);
    if (t[0] == '#') {
      std::string tag;
      ss >> tag;
      if (tag == "#meta") {
        std::string key;
        while (ss >> key) {
          if (key == "p")
            ss >> pf.sol.p;
          else if (key == "lambda_max")
            ss >> pf.sol.lambda_max;
          else if (key == "dev_null")
            ss >> pf.sol.dev_null;
          else {
            std::string skip;
            ss >> skip;
          }
        }
      } else if (tag == "#names") {
        std::string nm;
        while (ss >> nm) pf.names.push_back(nm);
      }
      continue;
    }
    if (pf.sol.p <= 0)
      throw FormatError(where(origin, lineno) + ": record before a valid #meta p line");
    double lambda, dev;
    int df, strong, viol, conv;
    if (!(ss >> lambda >> df >> dev >> strong >> viol >> conv))
      throw FormatError(where(origin, lineno) + ": malformed path record");
    SparseCoefs sc;
    std::string pairtok;
    while (ss >> pairtok) {
      const std::size_t colon = pairtok.find(':');
      if (colon == std::string::npos)
        throw FormatError(where(origin, lineno) + ": malformed coefficient pair '" + pairtok +
                          "'");
      int j;
      double v;
      try {
        j = std::stoi(pairtok.substr(0, colon));
        v = std::stod(pairtok.substr(colon + 1));
      } catch (const std::exception&) {
        throw FormatError(where(origin, lineno) + ": malformed coefficient pair '" + pairtok +
                          "'");
      }
      if (j < 1 || j > pf.sol.p)
        throw FormatError(where(origin, lineno) + ": coefficient index out of range");
      sc.index.push_back(j - 1);
      sc.value.push_back(v);
    }
    pf.sol.lambdas.push_back(lambda);
    pf.sol.df.push_back(df);
    pf.sol.dev_explained.push_back(dev);
    pf.sol.strong_sizes.push_back(strong);
    pf.sol.kkt_violations.push_back(viol);
    pf.sol.converged.push_back(conv != 0);
    pf.sol.betas.push_back(std::move(sc));
  }
  if (pf.sol.lambdas.empty()) throw FormatError(origin + ": path file has no records");
  pf.sol.scaling = identity_scaling(pf.sol.p);
  return pf;
}

PathFile read_path_file(const std::string& path) {
  std::ifstream in = open_input(path);
  return parse_path_file(in, path);
}

void write_cv_file(const CVResult& cv, std::ostream& out) {
  out << "#clogit-cv v1\n";
  out << "#meta folds " << cv.folds_used << " lambda_min " << format_double(cv.lambda_min)
      << " lambda_1se " << format_double(cv.lambda_1se) << " index_min " << cv.index_min + 1
      << " index_1se " << cv.index_1se + 1 << '\n';
  for (std::size_t l = 0; l < cv.lambdas.size(); ++l)
    out << format_double(cv.lambdas[l]) << ' ' << format_double(cv.cv_mean[l]) << ' '
        << format_double(cv.cv_se[l]) << '\n';
}

void write_truth_file(const SimulatedData& sim, std::ostream& out) {
  out << "#clogit-truth v1\n";
  out << "#meta p " << sim.true_beta.size() << " q " << sim.support.size() << " K "
      << sim.intercepts.size() << '\n';
  for (int j : sim.support) out << "b " << j + 1 << ' ' << format_double(sim.true_beta[j]) << '\n';
  for (Eigen::Index k = 0; k < sim.intercepts.size(); ++k)
    out << "i " << k + 1 << ' ' << format_double(sim.intercepts[k]) << '\n';
}

TruthFile parse_truth_file(std::istream& in, const std::string& origin) {
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw FormatError(origin + ": empty input");
  ++lineno;
  chomp(line);
  if (trim(line) != "#clogit-truth v1")
    throw FormatError(where(origin, lineno) + ": not a clogit truth file");

  TruthFile tf;
  int K = 0;
  std::vector<std::pair<int, double>> coefs;
  std::vector<std::pair<int, double>> inters;
  while (std::getline(in, line)) {
    ++lineno;
    chomp(line);
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::istringstream ss(t);
    if (t[0] == '#') {
      std::string tag;
      ss >> tag;
      if (tag == "#meta") {
        std::string key;
        while (ss >> key) {
          if (key == "p")
            ss >> tf.p;
          else if (key == "K")
            ss >> K;
          else {
            std::string skip;
            ss >> skip;
          }
        }
      }
      continue;
    }
    std::string kind;
    int idx;
    double v;
    if (!(ss >> kind >> idx >> v) || (kind != "b" && kind != "i"))
      throw FormatError(where(origin, lineno) + ": malformed truth record");
    if (kind == "b")
      coefs.emplace_back(idx - 1, v);
    else
      inters.emplace_back(idx - 1, v);
  }
  if (tf.p <= 0) throw FormatError(origin + ": truth file lacks a valid #meta p line");
  tf.beta = Eigen::VectorXd::Zero(tf.p);
  for (auto& [j, v] : coefs) {
    if (j < 0 || j >= tf.p) throw FormatError(origin + ": coefficient index out of range");
    tf.beta[j] = v;
    tf.support.push_back(j);
  }
  std::sort(tf.support.begin(), tf.support.end());
  tf.intercepts = Eigen::VectorXd::Zero(std::max(K, static_cast<int>(inters.size())));
  for (auto& [k, v] : inters) {
    if (k < 0 || k >= tf.intercepts.size())
      throw FormatError(origin + ": intercept index out of range");
    tf.intercepts[k] = v;
  }
  return tf;
}

TruthFile read_truth_file(const std::string& path) {
  std::ifstream in = open_input(path);
  return parse_truth_file(in, path);
}

void write_roc_file(const RocCurve& rc, const std::vector<double>& lambdas, std::ostream& out) {
  out << "#clogit-roc v1\n";
  out << "#columns lambda sensitivity specificity\n";
  for (std::size_t k = 0; k < rc.sensitivity.size(); ++k) {
    out << (k < lambdas.size() ? format_double(lambdas[k]) : "nan") << ' '
        << format_double(rc.sensitivity[k]) << ' ' << format_double(rc.specificity[k]) << '\n';
  }
  out << "#averaged sensitivity specificity\n";
  for (std::size_t k = 0; k < rc.avg_sensitivity.size(); ++k)
    out << format_double(rc.avg_sensitivity[k]) << ' ' << format_double(rc.avg_specificity[k])
        << '\n';
}

void write_plot_data(const PathFile& pf, std::ostream& out) {
  std::set<int> shown;
  for (const auto& sc : pf.sol.betas) shown.insert(sc.index.begin(), sc.index.end());
  out << "lambda,predictor,coefficient\n";
  for (std::size_t k = 0; k < pf.sol.lambdas.size(); ++k) {
    const Eigen::VectorXd beta = pf.sol.betas[k].to_dense(pf.sol.p);
    for (int j : shown) {
      const std::string name = j < static_cast<int>(pf.names.size())
                                   ? pf.names[static_cast<std::size_t>(j)]
                                   : "x" + std::to_string(j + 1);
      out << format_double(pf.sol.lambdas[k]) << ',' << name << ',' << format_double(beta[j])
          << '\n';
    }
  }
}

}  // namespace clogit
