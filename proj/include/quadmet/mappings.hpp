#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "quadmet/quad_engine.hpp"

namespace quadmet {

// A bijection between two spaces of equal size, stored as an explicit
// permutation: source point i corresponds to target point forward[i].
struct SpaceMap {
  Space source;
  Space target;
  std::vector<std::size_t> forward;

  SpaceMap(Space source_space, Space target_space, std::vector<std::size_t> forward_perm);
};

// Absolute cross-ratio R(T) = d(x,y) d(t,z) / (d(x,z) d(t,y)) of a tetrad
// of mutually distinct points.
double cross_ratio(const Space& s, const Tetrad& tetrad);

// Quasisymmetry scan: for every ordered triple (x, a, b) with a != x and
// b != x it checks rho(fx,fa) <= eta(d(x,a)/d(x,b)) * rho(fx,fb). For a
// monotone eta the critical ratio t* = d(x,a)/d(x,b) dominates every t.
CheckReport verify_quasisymmetric(const SpaceMap& map, const dsl::MonadicControl& eta,
                                  Tol tol = {});

// R(fT) <= eta(R(T)) over all mutually distinct tetrads (needs >= 4 points).
CheckReport verify_quasimobius(const SpaceMap& map, const dsl::MonadicControl& eta,
                               Tol tol = {});

// max |R(fT) - R(T)| <= tol_abs over all tetrads.
CheckReport verify_mobius_report(const SpaceMap& map, double tol_abs);
bool verify_mobius(const SpaceMap& map, double tol_abs);

// One point per ordered triple: domain ratio t = d(x,a)/d(x,b) and image
// ratio r = rho(fx,fa)/rho(fx,fb). Any eta passing verify_quasisymmetric
// satisfies r <= eta(t) everywhere on the envelope.
struct EnvelopePoint {
  double t = 0.0, r = 0.0;
  std::size_t x = 0, a = 0, b = 0;
};
std::vector<EnvelopePoint> qs_envelope(const SpaceMap& map);  // sorted by t
std::string envelope_to_csv(const SpaceMap& map, const std::vector<EnvelopePoint>& env);

struct TransformSpec {
  enum class Kind { Snowflake, Scale, Relabel };
  Kind kind = Kind::Scale;
  double param = 1.0;                  // alpha or lambda
  std::vector<std::size_t> perm;       // Relabel only
};

// Canonical maps: snowflake/scale keep the identity correspondence;
// relabel permutes the points.
SpaceMap make_transform_map(const Space& s, const TransformSpec& spec);

// {"source": space, "target": space, "forward": [indices]}
SpaceMap map_from_json(const std::string& text);
std::string map_to_json(const SpaceMap& map);

}  // namespace quadmet
