#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace clogit {

// Failure classes; the CLI maps each one onto a distinct exit code.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad file layout, inconsistent row widths, missing values.
class FormatError : public Error {
public:
  using Error::Error;
};

// Invalid configuration or arguments (nfolds > K, alpha out of range, ...).
class ParameterError : public Error {
public:
  using Error::Error;
};

// Non-finite intermediate quantities or degenerate data.
class NumericError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

// Iteration cap exceeded. Carries the last iterate so a path driver can
// keep going with a per-lambda flag instead of aborting the whole path.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& msg, Eigen::VectorXd last_iterate)
      : Error(msg), iterate_(std::move(last_iterate)) {}

  const Eigen::VectorXd& last_iterate() const { return iterate_; }

private:
  Eigen::VectorXd iterate_;
};

}  // namespace clogit
