#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace cxtomo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Invalid or inconsistent user-supplied configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure at runtime, e.g. a solve that cannot proceed (CLI exit code 3).
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cxtomo
