#pragma once

// Cross-checks of the closed forms and reductions against independent
// evaluations. Failures are reported, not thrown.

#include <string>
#include <vector>

#include "udw/quadrature.hpp"

namespace udw {

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst discrepancy seen
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool passed() const;
  std::string to_json() const;
};

ValidationReport run_validation(const QuadratureSpec& spec = {});

}  // namespace udw
