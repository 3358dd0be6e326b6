#pragma once

#include <stdexcept>
#include <string>

namespace tcdyn {

/// Invalid parameters or configuration (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure inside a solver (exit code 3).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iteration budget exhausted before the requested tolerance (exit code 4).
class NoConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tcdyn
