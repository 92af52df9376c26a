#pragma once

#include <stdexcept>
#include <string>

namespace ellgof {

/// Numerical failure at runtime (non-convergence, near-singular matrices,
/// failed estimation). Distinct from domain errors on arguments.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input data (CSV parse failures, shape mismatches in files).
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration (unknown tags, out-of-range settings, bad specs).
class config_error : public std::invalid_argument {
 public:
  explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace ellgof
