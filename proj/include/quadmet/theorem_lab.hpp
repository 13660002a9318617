#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "quadmet/mappings.hpp"

namespace quadmet {

// Log-spaced grid {2^k : k = min_exp..max_exp} used for the hypothesis
// implications, which quantify over all positive reals.
struct GridSpec {
  int min_exp = -6;
  int max_exp = 6;
  std::vector<double> values() const;
};

struct HypothesisViolation {
  std::vector<double> ts;
  double premise_lhs = 0.0, premise_rhs = 0.0;
  double conclusion_lhs = 0.0, conclusion_rhs = 0.0;
};

// A grid pass is evidence, not proof: the report records "no violation
// found on grid". The premise is accepted within +margin and the
// conclusion counted as violated only beyond +10*margin, so boundary
// tuples cannot produce spurious violations.
struct HypothesisReport {
  std::string theorem;  // qs_general | qs_additive | qm_multiplicative | ptolemy_qs
  std::size_t grid_size = 0;
  std::size_t scanned = 0;
  std::size_t premise_hits = 0;
  std::size_t violation_count = 0;
  std::vector<HypothesisViolation> violations;  // capped at 64 entries
  bool pass() const { return violation_count == 0; }
};

// 1 <= phi(psi(1/t1,1/t2), psi(1/t3,1/t4))  =>  same with eta(t_i).
HypothesisReport check_hyp_qs_general(const dsl::DyadicFunction& phi,
                                      const dsl::DyadicFunction& psi,
                                      const dsl::MonadicControl& eta,
                                      const GridSpec& grid = {}, Tol tol = {});
// 1 + (1/t1)(1/t5) <= phi(1/t1+1/t2, 1/t3+1/t4)  =>
// 1 + eta(1/t1)eta(1/t5) <= phi(1/eta(t1)+1/eta(t2), 1/eta(t3)+1/eta(t4)).
HypothesisReport check_hyp_qs_additive(const dsl::DyadicFunction& phi,
                                       const dsl::MonadicControl& eta,
                                       const GridSpec& grid = {}, Tol tol = {});
// 1 <= phi(t1,t2)  =>  1 <= phi(1/eta(1/t1), 1/eta(1/t2)).
HypothesisReport check_hyp_qm(const dsl::DyadicFunction& phi,
                              const dsl::MonadicControl& eta,
                              const GridSpec& grid = {}, Tol tol = {});
// t1t2t3t4 <= t1t2 + t3t4  =>  eta(t1)eta(t2)eta(t3)eta(t4) <=
// eta(t1)eta(t2) + eta(t3)eta(t4).
HypothesisReport check_hyp_ptolemy_qs(const dsl::MonadicControl& eta,
                                      const GridSpec& grid = {}, Tol tol = {});

// (u+v)^alpha <= u^alpha + v^alpha on the grid, 0 < alpha <= 1.
dsl::PropertyReport verify_power_subadditivity(double alpha, const GridSpec& grid = {},
                                               Tol tol = {});

// The preservation routes: a quasisymmetric map with the general pair
// machinery, its multiplicative and additive specializations, and the
// quasimobius multiplicative route.
enum class ExperimentVariant { QsGeneral, QsMultiplicative, QsAdditive, QmMultiplicative };

const char* experiment_variant_name(ExperimentVariant v);

struct ExperimentReport {
  std::string variant;
  std::string tag;  // battery bookkeeping
  CheckReport premise;
  CheckReport map_check;
  std::vector<std::pair<std::string, bool>> conditions;
  HypothesisReport hypothesis;
  CheckReport conclusion;
  bool target_is_metric = false;
  bool applicable = false;         // premise, conditions and hypothesis all hold
  bool theorem_violation = false;  // applicable, yet the conclusion fails
};

// Runs premise scan on the source, verifies the map (quasisymmetric, or
// quasimobius for the QmMultiplicative variant; failure is an error), runs
// the hypothesis grid, then the conclusion scan on the target. psi is
// consulted for QsGeneral only; the other variants fix psi to the product
// or the sum.
ExperimentReport run_preservation_experiment(const Space& source, const TransformSpec& map_spec,
                                             const dsl::DyadicFunction& phi,
                                             const dsl::DyadicFunction* psi,
                                             const dsl::MonadicControl& eta,
                                             ExperimentVariant variant,
                                             const GridSpec& grid = {}, Tol tol = {});

struct BatteryReport {
  std::size_t experiments = 0;
  std::size_t premise_failures = 0;
  std::size_t violations = 0;
  bool pass = true;  // zero theorem violations
  std::vector<ExperimentReport> reports;
};

// Config: a single experiment object or {"experiments": [...]}, each with
//   variant:   qs-general | qs-multiplicative | qs-additive | qm-multiplicative
//   spaces:    {kind: planar|random-metric|tree|ultrametric|semimetric|lp,
//               n, count, seed, dim?, p?}
//   map:       {kind: snowflake|scale|identity|relabel, alpha?, lambda?}
//   functions: {phi, psi?, eta} as DSL strings
//   grid:      {min_exp, max_exp}
BatteryReport run_experiment_battery(const std::string& config_json, Tol tol = {});

}  // namespace quadmet
