#include "quadmet/quad_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "quadmet/error.hpp"

namespace quadmet {

namespace {

void require_props(const dsl::DyadicFunction& f, std::initializer_list<const char*> names,
                   const char* role) {
  for (const char* name : names)
    if (!f.has(name))
      fail(Errc::UnvalidatedFunction, std::string(role) + " '" + f.text() +
                                          "' lacks the verified property '" + name + "'");
}

void finish_witness(CheckReport& r, const Space& s) {
  for (std::size_t i : r.witness) r.witness_labels.push_back(s.label(i));
}

// Shared quadruple scan: lhs/rhs supplied per ordered quadruple.
template <typename Lhs, typename Rhs>
CheckReport scan_quadruples(const Space& s, std::string property, bool include_degenerate,
                            Tol tol, Lhs&& lhs_of, Rhs&& rhs_of) {
  CheckReport r;
  r.property = std::move(property);
  std::size_t n = s.size();
  bool have = false;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        for (std::size_t t = 0; t < n; ++t) {
          if (!include_degenerate) {
            Tetrad q{x, y, z, t};
            if (!q.distinct()) continue;
          }
          double lhs = lhs_of(x, y, z, t);
          double rhs = rhs_of(x, y, z, t);
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
  finish_witness(r, s);
  return r;
}

}  // namespace

CheckReport check_quadruple_pair(const Space& s, const dsl::DyadicFunction& phi,
                                 const dsl::DyadicFunction& psi, bool include_degenerate,
                                 Tol tol) {
  require_props(phi, {dsl::prop::symmetric, dsl::prop::monotone}, "phi");
  require_props(psi, {dsl::prop::symmetric, dsl::prop::monotone, dsl::prop::zero_at_origin},
                "psi");
  return scan_quadruples(
      s, "quadruple-pair", include_degenerate, tol,
      [&](std::size_t x, std::size_t y, std::size_t z, std::size_t t) {
        return psi(s(x, z), s(t, y));
      },
      [&](std::size_t x, std::size_t y, std::size_t z, std::size_t t) {
        return phi(psi(s(x, y), s(t, z)), psi(s(x, t), s(y, z)));
      });
}

CheckReport check_ptolemaic(const Space& s, Tol tol) {
  return scan_quadruples(
      s, "ptolemaic", true, tol,
      [&](std::size_t x, std::size_t y, std::size_t z, std::size_t t) {
        return s(x, z) * s(t, y);
      },
      [&](std::size_t x, std::size_t y, std::size_t z, std::size_t t) {
        return s(x, y) * s(t, z) + s(x, t) * s(y, z);
      });
}

CheckReport check_additive(const Space& s, Tol tol) {
  CheckReport r = scan_quadruples(
      s, "additive", true, tol,
      [&](std::size_t x, std::size_t y, std::size_t z, std::size_t t) {
        return s(x, z) + s(t, y);
      },
      [&](std::size_t x, std::size_t y, std::size_t z, std::size_t t) {
        return std::max(s(x, y) + s(t, z), s(x, t) + s(y, z));
      });
  // Equivalent reading: the two largest of the three pairing sums agree.
  bool equal_top = true;
  std::size_t n = s.size();
  for (std::size_t x = 0; x < n && equal_top; ++x)
    for (std::size_t y = 0; y < n && equal_top; ++y)
      for (std::size_t z = 0; z < n && equal_top; ++z)
        for (std::size_t t = 0; t < n; ++t) {
          double s1 = s(x, z) + s(t, y);
          double s2 = s(x, y) + s(t, z);
          double s3 = s(x, t) + s(y, z);
          double top = std::max({s1, s2, s3});
          double second = std::max(std::min(s1, s2), std::min(std::max(s1, s2), s3));
          if (!tol.eq(top, second)) {
            equal_top = false;
            break;
          }
        }
  r.equivalent_pass = equal_top;
  return r;
}

CheckReport check_delta_hyperbolic(const Space& s, double delta, Tol tol) {
  if (delta < 0.0) fail(Errc::InvalidArgument, "delta must be nonnegative");
  return scan_quadruples(
      s, "hyperbolic", true, tol,
      [&](std::size_t x, std::size_t y, std::size_t z, std::size_t t) {
        return s(x, z) + s(t, y);
      },
      [&](std::size_t x, std::size_t y, std::size_t z, std::size_t t) {
        return 2.0 * delta + std::max(s(x, y) + s(t, z), s(x, t) + s(y, z));
      });
}

double min_hyperbolicity_delta(const Space& s) {
  std::size_t n = s.size();
  double best = 0.0;
  // The pairing sums depend on the multiset only.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k)
        for (std::size_t l = k; l < n; ++l) {
          double s1 = s(i, j) + s(k, l);
          double s2 = s(i, k) + s(j, l);
          double s3 = s(i, l) + s(j, k);
          double top = std::max({s1, s2, s3});
          double second = std::max(std::min(s1, s2), std::min(std::max(s1, s2), s3));
          best = std::max(best, (top - second) / 2.0);
        }
  return best;
}

CheckReport check_roundness_at(const Space& s, double q, Tol tol) {
  if (q < 1.0) fail(Errc::QBelowOne, "roundness exponent must satisfy q >= 1");
  auto pq = [q](double d) { return d == 0.0 ? 0.0 : std::pow(d, q); };
  // Slots (x1, x2, y1, y2); repeated points allowed.
  return scan_quadruples(
      s, "roundness-at", true, tol,
      [&](std::size_t x1, std::size_t x2, std::size_t y1, std::size_t y2) {
        return pq(s(x1, x2)) + pq(s(y1, y2));
      },
      [&](std::size_t x1, std::size_t x2, std::size_t y1, std::size_t y2) {
        return pq(s(x1, y1)) + pq(s(x1, y2)) + pq(s(x2, y1)) + pq(s(x2, y2));
      });
}

RoundnessResult roundness(const Space& s, double q_cap, double q_tol, Tol tol) {
  if (!(q_cap > 1.0)) fail(Errc::InvalidArgument, "q_cap must exceed 1");
  if (!(q_tol > 0.0)) fail(Errc::InvalidArgument, "q_tol must be positive");
  constexpr int kGridSize = 64;
  std::vector<double> qs(kGridSize);
  std::vector<bool> ok(kGridSize);
  for (int i = 0; i < kGridSize; ++i) {
    qs[i] = std::exp(std::log(q_cap) * static_cast<double>(i) / (kGridSize - 1));
    ok[i] = check_roundness_at(s, qs[i], tol).pass;
  }
  RoundnessResult res;
  int first_fail = kGridSize;
  for (int i = 0; i < kGridSize; ++i)
    if (!ok[i]) {
      first_fail = i;
      break;
    }
  if (first_fail == kGridSize) {
    res.q = q_cap;
    res.at_cap = true;
    return res;
  }
  res.first_fail_q = qs[first_fail];
  for (int i = first_fail; i < kGridSize; ++i)
    if (ok[i]) {
      // The feasible set is not downward closed; report the boundary of
      // trouble rather than pretending a supremum exists.
      res.prefix_ok = false;
      res.q = qs[first_fail];
      return res;
    }
  if (first_fail == 0) {
    res.q = 1.0;
    return res;
  }
  double lo = qs[first_fail - 1], hi = qs[first_fail];
  while (hi - lo > q_tol) {
    double mid = 0.5 * (lo + hi);
    if (check_roundness_at(s, mid, tol).pass)
      lo = mid;
    else
      hi = mid;
  }
  res.q = lo;
  return res;
}

CheckReport check_cat0_quadrilateral(const Space& s, Tol tol) {
  auto sq = [](double d) { return d * d; };
  return scan_quadruples(
      s, "cat0", true, tol,
      [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
        return sq(s(a, d)) + sq(s(b, c));
      },
      [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
        return sq(s(a, b)) + sq(s(b, d)) + sq(s(d, c)) + sq(s(c, a));
      });
}

CheckReport check_reshetnyak(const Space& s, Tol tol) {
  auto sq = [](double d) { return d * d; };
  return scan_quadruples(
      s, "reshetnyak", true, tol,
      [&](std::size_t x1, std::size_t x2, std::size_t x3, std::size_t x4) {
        return sq(s(x1, x3)) + sq(s(x2, x4));
      },
      [&](std::size_t x1, std::size_t x2, std::size_t x3, std::size_t x4) {
        return sq(s(x2, x3)) + sq(s(x4, x1)) + 2.0 * s(x1, x2) * s(x3, x4);
      });
}

namespace {

// All set partitions of the four slots (restricted growth strings), kept
// when they use at most three blocks, i.e. at least two slots coincide.
std::vector<std::array<int, 4>> coincidence_patterns() {
  std::vector<std::array<int, 4>> out;
  std::array<int, 4> rgs{};
  std::function<void(int, int)> rec = [&](int slot, int max_used) {
    if (slot == 4) {
      if (max_used + 1 <= 3) out.push_back(rgs);
      return;
    }
    for (int b = 0; b <= max_used + 1; ++b) {
      rgs[slot] = b;
      rec(slot + 1, std::max(max_used, b));
    }
  };
  rec(0, -1);
  return out;
}

}  // namespace

CheckReport degenerate_suite(const Space& s, const dsl::DyadicFunction& phi,
                             const dsl::DyadicFunction& psi, DegenerateMode mode, Tol tol) {
  auto need = [&](const dsl::DyadicFunction& f, const char* name, const char* role) {
    if (!f.has(name))
      fail(Errc::PreconditionUnmet, std::string("lemma condition missing: ") + role + " '" +
                                        f.text() + "' lacks '" + name + "'");
  };
  need(phi, dsl::prop::symmetric, "phi");
  need(phi, dsl::prop::monotone, "phi");
  need(phi, dsl::prop::zero_section_bound, "phi");
  std::string property = "degenerate-general";
  if (mode == DegenerateMode::General) {
    need(psi, dsl::prop::symmetric, "psi");
    need(psi, dsl::prop::monotone, "psi");
    need(psi, dsl::prop::zero_at_origin, "psi");
    dsl::PropertyReport pair = dsl::validate_pair(phi, psi, s, tol);
    if (!pair.passed(dsl::prop::triangle_on_space))
      fail(Errc::PreconditionUnmet,
           "lemma condition missing: psi is not a triangle function on this space");
    if (!pair.passed(dsl::prop::zero_section_dominates))
      fail(Errc::PreconditionUnmet,
           "lemma condition missing: psi(0,a) <= phi(0,a) fails on the grid");
  } else if (mode == DegenerateMode::Multiplicative) {
    property = "degenerate-multiplicative";
  } else {
    property = "degenerate-additive";
    if (!is_metric(s, tol))
      fail(Errc::PreconditionUnmet, "lemma condition missing: the space is not metric");
  }

  CheckReport r;
  r.property = property;
  std::size_t n = s.size();
  bool have = false;
  auto consider = [&](std::size_t x, std::size_t y, std::size_t z, std::size_t t) {
    double lhs = 0.0, rhs = 0.0;
    switch (mode) {
      case DegenerateMode::General:
        lhs = psi(s(x, z), s(t, y));
        rhs = phi(psi(s(x, y), s(t, z)), psi(s(x, t), s(y, z)));
        break;
      case DegenerateMode::Multiplicative:
        lhs = s(x, z) * s(t, y);
        rhs = phi(s(x, y) * s(t, z), s(x, t) * s(y, z));
        break;
      case DegenerateMode::Additive:
        lhs = s(x, z) + s(t, y);
        rhs = phi(s(x, y) + s(t, z), s(x, t) + s(y, z));
        break;
    }
    double d = lhs - rhs;
    ++r.scanned;
    if (!have || d > r.defect) {
      have = true;
      r.defect = d;
      r.witness = {x, y, z, t};
    }
    if (!tol.leq(lhs, rhs)) r.pass = false;
  };

  static const std::vector<std::array<int, 4>> patterns = coincidence_patterns();
  for (const auto& pat : patterns) {
    int blocks = *std::max_element(pat.begin(), pat.end()) + 1;
    std::array<std::size_t, 3> pts{};
    std::function<void(int)> assign = [&](int depth) {
      if (depth == blocks) {
        consider(pts[pat[0]], pts[pat[1]], pts[pat[2]], pts[pat[3]]);
        return;
      }
      for (std::size_t p = 0; p < n; ++p) {
        bool used = false;
        for (int d = 0; d < depth; ++d)
          if (pts[d] == p) used = true;
        if (used) continue;
        pts[depth] = p;
        assign(depth + 1);
      }
    };
    if (static_cast<std::size_t>(blocks) <= n) assign(0);
  }
  if (!have) r.defect = 0.0;
  finish_witness(r, s);
  return r;
}

SpaceClassification classify(const Space& s, Tol tol) {
  SpaceClassification c;
  c.is_metric = is_metric(s, tol);
  c.is_ultrametric = is_ultrametric(s, tol);
  c.is_additive = check_additive(s, tol).pass;
  c.is_ptolemaic = check_ptolemaic(s, tol).pass;
  c.delta_star = min_hyperbolicity_delta(s);
  c.roundness = roundness(s, 64.0, 1e-6, tol);
  return c;
}

}  // namespace quadmet
