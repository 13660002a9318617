#include "quadmet/mappings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <tuple>

#include "json.hpp"
#include "quadmet/error.hpp"

namespace quadmet {

namespace {

std::string fmt(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void check_eta(const dsl::MonadicControl& eta) {
  if (!eta.validated())
    fail(Errc::UnvalidatedFunction,
         "control '" + eta.text() + "' failed grid validation (needs eta(0)=0, strict "
         "increase and growth past 1)");
}

}  // namespace

SpaceMap::SpaceMap(Space source_space, Space target_space, std::vector<std::size_t> forward_perm)
    : source(std::move(source_space)),
      target(std::move(target_space)),
      forward(std::move(forward_perm)) {
  std::size_t n = source.size();
  if (target.size() != n) fail(Errc::InvalidArgument, "source and target sizes differ");
  if (forward.size() != n) fail(Errc::InvalidArgument, "forward permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (std::size_t v : forward) {
    if (v >= n || seen[v]) fail(Errc::InvalidArgument, "forward is not a bijection");
    seen[v] = true;
  }
}

double cross_ratio(const Space& s, const Tetrad& q) {
  std::size_t n = s.size();
  if (q.x >= n || q.y >= n || q.z >= n || q.t >= n)
    fail(Errc::InvalidArgument, "tetrad index out of range");
  if (!q.distinct())
    fail(Errc::NonDistinctTetrad, "cross-ratio needs four mutually distinct points");
  return (s(q.x, q.y) * s(q.t, q.z)) / (s(q.x, q.z) * s(q.t, q.y));
}

CheckReport verify_quasisymmetric(const SpaceMap& m, const dsl::MonadicControl& eta, Tol tol) {
  check_eta(eta);
  CheckReport r;
  r.property = "quasisymmetric";
  const Space& X = m.source;
  const Space& Y = m.target;
  std::size_t n = X.size();
  bool have = false;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t a = 0; a < n; ++a) {
      if (a == x) continue;
      double fxa = Y(m.forward[x], m.forward[a]);
      for (std::size_t b = 0; b < n; ++b) {
        if (b == x) continue;
        double tstar = X(x, a) / X(x, b);
        double lhs = fxa;
        double rhs = eta(tstar) * Y(m.forward[x], m.forward[b]);
        double d = lhs - rhs;
        ++r.scanned;
        if (!have || d > r.defect) {
          have = true;
          r.defect = d;
          r.witness = {x, a, b};
        }
        if (!tol.leq(lhs, rhs)) r.pass = false;
      }
    }
  if (!have) r.defect = 0.0;
  for (std::size_t i : r.witness) r.witness_labels.push_back(X.label(i));
  return r;
}

CheckReport verify_quasimobius(const SpaceMap& m, const dsl::MonadicControl& eta, Tol tol) {
  check_eta(eta);
  if (m.source.size() < 4)
    fail(Errc::TooFewPoints, "quasimobius verification needs at least 4 points");
  CheckReport r;
  r.property = "quasimobius";
  std::size_t n = m.source.size();
  bool have = false;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        for (std::size_t t = 0; t < n; ++t) {
          Tetrad q{x, y, z, t};
          if (!q.distinct()) continue;
          Tetrad fq{m.forward[x], m.forward[y], m.forward[z], m.forward[t]};
          double lhs = cross_ratio(m.target, fq);
          double rhs = eta(cross_ratio(m.source, q));
          double d = lhs - rhs;
          ++r.scanned;
          if (!have || d > r.defect) {
            have = true;
            r.defect = d;
            r.witness = {x, y, z, t};
          }
          if (!tol.leq(lhs, rhs)) r.pass = false;
        }
  if (!have) r.defect = 0.0;
  for (std::size_t i : r.witness) r.witness_labels.push_back(m.source.label(i));
  return r;
}

CheckReport verify_mobius_report(const SpaceMap& m, double tol_abs) {
  if (m.source.size() < 4)
    fail(Errc::TooFewPoints, "mobius verification needs at least 4 points");
  CheckReport r;
  r.property = "mobius";
  std::size_t n = m.source.size();
  bool have = false;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        for (std::size_t t = 0; t < n; ++t) {
          Tetrad q{x, y, z, t};
          if (!q.distinct()) continue;
          Tetrad fq{m.forward[x], m.forward[y], m.forward[z], m.forward[t]};
          double d = std::fabs(cross_ratio(m.target, fq) - cross_ratio(m.source, q));
          ++r.scanned;
          if (!have || d > r.defect) {
            have = true;
            r.defect = d;
            r.witness = {x, y, z, t};
          }
        }
  if (!have) r.defect = 0.0;
  r.pass = r.defect <= tol_abs;
  for (std::size_t i : r.witness) r.witness_labels.push_back(m.source.label(i));
  return r;
}

bool verify_mobius(const SpaceMap& m, double tol_abs) {
  return verify_mobius_report(m, tol_abs).pass;
}

std::vector<EnvelopePoint> qs_envelope(const SpaceMap& m) {
  std::vector<EnvelopePoint> env;
  const Space& X = m.source;
  const Space& Y = m.target;
  std::size_t n = X.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t a = 0; a < n; ++a) {
      if (a == x) continue;
      for (std::size_t b = 0; b < n; ++b) {
        if (b == x) continue;
        EnvelopePoint p;
        p.t = X(x, a) / X(x, b);
        p.r = Y(m.forward[x], m.forward[a]) / Y(m.forward[x], m.forward[b]);
        p.x = x;
        p.a = a;
        p.b = b;
        env.push_back(p);
      }
    }
  std::sort(env.begin(), env.end(), [](const EnvelopePoint& l, const EnvelopePoint& r) {
    if (l.t != r.t) return l.t < r.t;
    return std::tie(l.x, l.a, l.b) < std::tie(r.x, r.a, r.b);
  });
  return env;
}

std::string envelope_to_csv(const SpaceMap& m, const std::vector<EnvelopePoint>& env) {
  std::string out = "t,r,x,a,b\n";
  for (const auto& p : env) {
    out += fmt(p.t);
    out += ',';
    out += fmt(p.r);
    out += ',';
    out += m.source.label(p.x);
    out += ',';
    out += m.source.label(p.a);
    out += ',';
    out += m.source.label(p.b);
    out += '\n';
  }
  return out;
}

SpaceMap make_transform_map(const Space& s, const TransformSpec& spec) {
  switch (spec.kind) {
    case TransformSpec::Kind::Snowflake: {
      std::vector<std::size_t> id(s.size());
      std::iota(id.begin(), id.end(), 0);
      return SpaceMap(s, snowflake(s, spec.param), std::move(id));
    }
    case TransformSpec::Kind::Scale: {
      std::vector<std::size_t> id(s.size());
      std::iota(id.begin(), id.end(), 0);
      return SpaceMap(s, scale(s, spec.param), std::move(id));
    }
    case TransformSpec::Kind::Relabel:
      return SpaceMap(s, relabel(s, spec.perm), spec.perm);
  }
  fail(Errc::InvalidArgument, "bad transform kind");
}

SpaceMap map_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::ParseError, "invalid JSON");
  if (!j.is_object() || !j.contains("source") || !j.contains("target") || !j.contains("forward"))
    fail(Errc::ParseError, "map JSON needs \"source\", \"target\" and \"forward\"");
  Space src = space_from_json(j["source"].dump());
  Space dst = space_from_json(j["target"].dump());
  std::vector<std::size_t> fwd;
  for (const auto& v : j["forward"]) {
    if (!v.is_number_unsigned()) fail(Errc::ParseError, "forward must hold indices");
    fwd.push_back(v.get<std::size_t>());
  }
  return SpaceMap(std::move(src), std::move(dst), std::move(fwd));
}

std::string map_to_json(const SpaceMap& m) {
  nlohmann::json j;
  j["source"] = nlohmann::json::parse(space_to_json(m.source));
  j["target"] = nlohmann::json::parse(space_to_json(m.target));
  j["forward"] = m.forward;
  return j.dump();
}

}  // namespace quadmet
