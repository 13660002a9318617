#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "quadmet/funcdsl.hpp"
#include "quadmet/space.hpp"
#include "quadmet/tolerance.hpp"

namespace quadmet {

// Ordered quadruple of point indices (x, y, z, t).
struct Tetrad {
  std::size_t x = 0, y = 0, z = 0, t = 0;
  std::array<std::size_t, 4> indices() const { return {x, y, z, t}; }
  bool distinct() const {
    return x != y && x != z && x != t && y != z && y != t && z != t;
  }
};

// Outcome of an exhaustive inequality scan. defect is the maximum of
// lhs - rhs over everything scanned (positive = violation); the witness
// attains it. pass reflects the per-item tolerance decision.
struct CheckReport {
  std::string property;
  bool pass = true;
  double defect = 0.0;
  std::vector<std::size_t> witness;
  std::vector<std::string> witness_labels;
  std::size_t scanned = 0;
  // check_additive only: the "two largest pairing sums are equal" reading.
  std::optional<bool> equivalent_pass;
};

// Generic scan of psi(d(x,z), d(t,y)) <= phi(psi(d(x,y), d(t,z)),
// psi(d(x,t), d(y,z))) over ordered quadruples; coincident points are
// included unless include_degenerate is false. phi must be certified
// symmetric and monotone, psi additionally zero at the origin.
CheckReport check_quadruple_pair(const Space& s, const dsl::DyadicFunction& phi,
                                 const dsl::DyadicFunction& psi,
                                 bool include_degenerate = true, Tol tol = {});

// d(x,z)d(t,y) <= d(x,y)d(t,z) + d(x,t)d(y,z)
CheckReport check_ptolemaic(const Space& s, Tol tol = {});
// d(x,z)+d(t,y) <= max{d(x,y)+d(t,z), d(x,t)+d(y,z)}
CheckReport check_additive(const Space& s, Tol tol = {});
// d(x,z)+d(t,y) <= 2*delta + max{...}
CheckReport check_delta_hyperbolic(const Space& s, double delta, Tol tol = {});
// Minimal delta: max over quadruples of (S1 - S2)/2 for the sorted pairing
// sums S1 >= S2 >= S3.
double min_hyperbolicity_delta(const Space& s);

// d(x1,x2)^q + d(y1,y2)^q <= sum of the four cross distances to the q-th
// power, q >= 1; repeated points allowed.
CheckReport check_roundness_at(const Space& s, double q, Tol tol = {});

struct RoundnessResult {
  double q = 1.0;
  bool at_cap = false;
  // The feasibility pattern on the coarse q grid was downward closed; when
  // false, q holds the smallest failing grid value instead of a supremum.
  bool prefix_ok = true;
  double first_fail_q = 0.0;  // 0 when every grid value passed
};

// Largest q in [1, q_cap] passing check_roundness_at, located by bisection
// to q_tol after probing a 64-point log-spaced grid.
RoundnessResult roundness(const Space& s, double q_cap = 64.0, double q_tol = 1e-6,
                          Tol tol = {});

// d(a,d)^2 + d(b,c)^2 <= d(a,b)^2 + d(b,d)^2 + d(d,c)^2 + d(c,a)^2
CheckReport check_cat0_quadrilateral(const Space& s, Tol tol = {});
// d(x1,x3)^2 + d(x2,x4)^2 <= d(x2,x3)^2 + d(x4,x1)^2 + 2 d(x1,x2) d(x3,x4)
CheckReport check_reshetnyak(const Space& s, Tol tol = {});

// Coincidence-pattern scan: every set partition of the four slots with at
// most three distinct points, over all injective point assignments.
enum class DegenerateMode { General, Multiplicative, Additive };
CheckReport degenerate_suite(const Space& s, const dsl::DyadicFunction& phi,
                             const dsl::DyadicFunction& psi, DegenerateMode mode,
                             Tol tol = {});

struct SpaceClassification {
  bool is_metric = false;
  bool is_ultrametric = false;
  bool is_additive = false;
  bool is_ptolemaic = false;
  double delta_star = 0.0;
  RoundnessResult roundness;
};

SpaceClassification classify(const Space& s, Tol tol = {});

}  // namespace quadmet
