#pragma once

#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <string>

namespace cshv {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input to the spectral Poisson solve had a nonzero mean.
struct NonMeanZeroError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The admissibility inequality failed (or a line search was pushed against
/// its boundary); `component` is 1-based.
struct AdmissibilityError : std::runtime_error {
  int component;
  AdmissibilityError(const std::string& what, int comp)
      : std::runtime_error(what), component(comp) {}
};

/// A constraint discriminant went nonpositive during continuation.
struct NegativeDiscriminantError : std::runtime_error {
  int component;
  NegativeDiscriminantError(const std::string& what, int comp)
      : std::runtime_error(what), component(comp) {}
};

struct StepUnderflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// exp() guard tripped: some u_j exceeded the overflow threshold.
struct FieldOverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PathCollapseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Diagnostics that do not stop a run.  Silenced with CSHV_QUIET=1.
inline void warn(const std::string& msg) {
  if (const char* q = std::getenv("CSHV_QUIET"); q && q[0] == '1') return;
  std::cerr << "[cshv] warning: " << msg << "\n";
}

}  // namespace cshv
