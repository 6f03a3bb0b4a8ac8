#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace combline {

// Malformed inputs, files, or violated preconditions.  CLI exit code 1.
struct structural_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter solve failed to converge; carries the last per-gap closure
// residuals (relative to the slit height of each gap).
struct solver_error : structural_error {
  std::vector<double> residuals;
  solver_error(const std::string& msg, std::vector<double> res)
      : structural_error(msg), residuals(std::move(res)) {}
};

// Geometry too tight for the highest quadrature order we are willing to use.
struct resolution_error : structural_error {
  using structural_error::structural_error;
};

// Kernel tails carry more than the allowed mass outside the working window.
struct window_error : structural_error {
  using structural_error::structural_error;
};

// Weighted least-squares system too close to singular.
struct conditioning_error : structural_error {
  using structural_error::structural_error;
};

// A verification assert failed inside an experiment driver.  CLI exit code 2.
struct check_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace combline
