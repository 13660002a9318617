#pragma once

#include <string>

#include "quadmet/quad_engine.hpp"
#include "quadmet/theorem_lab.hpp"

namespace quadmet {

// Compact JSON with lexicographically sorted keys; byte-stable for fixed
// inputs. Every report carries a top-level "pass" field.
std::string to_json_string(const CheckReport& r);
std::string to_json_string(const dsl::PropertyReport& r);
std::string to_json_string(const HypothesisReport& r);
std::string to_json_string(const ExperimentReport& r);
std::string to_json_string(const BatteryReport& r);
std::string to_json_string(const SpaceClassification& c);

}  // namespace quadmet
