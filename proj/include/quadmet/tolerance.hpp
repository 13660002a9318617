#pragma once

#include <algorithm>
#include <cmath>

namespace quadmet {

// Inequality tolerance: relative, scaled by the larger side, with an
// absolute floor. "lhs <= rhs" is accepted when lhs <= rhs + margin and
// "a == b" when |a - b| <= margin.
struct Tol {
  double rel = 1e-9;
  double abs = 1e-12;

  double margin(double a, double b) const {
    return std::max(abs, rel * std::max(std::fabs(a), std::fabs(b)));
  }
  bool leq(double lhs, double rhs) const { return lhs <= rhs + margin(lhs, rhs); }
  bool eq(double a, double b) const { return std::fabs(a - b) <= margin(a, b); }
};

}  // namespace quadmet
