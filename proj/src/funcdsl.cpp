#include "quadmet/funcdsl.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <random>

#include "quadmet/error.hpp"

namespace quadmet::dsl {

namespace {

std::string fmt(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

NodePtr make_number(double x) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Number;
  n->number = x;
  return n;
}

NodePtr make_var(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Variable;
  n->var = v;
  return n;
}

NodePtr make_binary(BinOp op, NodePtr l, NodePtr r) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Binary;
  n->op = op;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

NodePtr make_call(Fn2 fn, NodePtr l, NodePtr r) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Call;
  n->fn = fn;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

struct Parser {
  const std::string& src;
  std::size_t pos = 0;
  Arity arity;

  void skip_ws() {
    while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t' || src[pos] == '\n' ||
                                src[pos] == '\r'))
      ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void syntax_error(std::size_t at, const std::string& what) {
    fail(Errc::SyntaxError, what + " at offset " + std::to_string(at), at);
  }

  NodePtr parse_expr() {
    NodePtr left = parse_term();
    for (;;) {
      skip_ws();
      if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) {
        BinOp op = src[pos] == '+' ? BinOp::Add : BinOp::Sub;
        ++pos;
        left = make_binary(op, std::move(left), parse_term());
      } else {
        return left;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr left = parse_factor();
    for (;;) {
      skip_ws();
      if (pos < src.size() && (src[pos] == '*' || src[pos] == '/')) {
        BinOp op = src[pos] == '*' ? BinOp::Mul : BinOp::Div;
        ++pos;
        left = make_binary(op, std::move(left), parse_factor());
      } else {
        return left;
      }
    }
  }

  NodePtr parse_factor() {
    NodePtr base = parse_atom();
    skip_ws();
    if (pos < src.size() && src[pos] == '^') {
      ++pos;
      return make_binary(BinOp::Pow, std::move(base), parse_factor());  // right assoc
    }
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos >= src.size()) syntax_error(pos, "expected a value");
    char c = src[pos];
    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expr();
      skip_ws();
      if (!eat(')')) syntax_error(pos, "expected ')'");
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') {
      double value = 0.0;
      auto res = std::from_chars(src.data() + pos, src.data() + src.size(), value);
      if (res.ec != std::errc()) syntax_error(pos, "invalid number");
      pos = static_cast<std::size_t>(res.ptr - src.data());
      return make_number(value);
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
      std::size_t start = pos;
      while (pos < src.size() &&
             ((src[pos] >= 'a' && src[pos] <= 'z') || (src[pos] >= 'A' && src[pos] <= 'Z') ||
              (src[pos] >= '0' && src[pos] <= '9') || src[pos] == '_'))
        ++pos;
      std::string name = src.substr(start, pos - start);
      if (name == "max" || name == "min") {
        skip_ws();
        if (!eat('(')) syntax_error(pos, "expected '(' after '" + name + "'");
        NodePtr a = parse_expr();
        skip_ws();
        if (!eat(',')) syntax_error(pos, "expected ','");
        NodePtr b = parse_expr();
        skip_ws();
        if (!eat(')')) syntax_error(pos, "expected ')'");
        return make_call(name == "max" ? Fn2::Max : Fn2::Min, std::move(a), std::move(b));
      }
      if (arity == Arity::Dyadic) {
        if (name == "u") return make_var(Var::U);
        if (name == "v") return make_var(Var::V);
      } else {
        if (name == "t") return make_var(Var::T);
      }
      fail(Errc::UnknownVariable,
           "unknown variable '" + name + "' at offset " + std::to_string(start), start);
    }
    syntax_error(pos, std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

NodePtr parse(const std::string& text, Arity arity) {
  Parser p{text, 0, arity};
  NodePtr root = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.syntax_error(p.pos, "unexpected trailing input");
  return root;
}

double eval(const Node& node, const Bindings& b) {
  switch (node.kind) {
    case Node::Kind::Number:
      return node.number;
    case Node::Kind::Variable:
      switch (node.var) {
        case Var::U: return b.u;
        case Var::V: return b.v;
        case Var::T: return b.t;
      }
      break;
    case Node::Kind::Call: {
      double l = eval(*node.lhs, b), r = eval(*node.rhs, b);
      return node.fn == Fn2::Max ? std::max(l, r) : std::min(l, r);
    }
    case Node::Kind::Binary: {
      double l = eval(*node.lhs, b), r = eval(*node.rhs, b);
      double x = 0.0;
      switch (node.op) {
        case BinOp::Add: x = l + r; break;
        case BinOp::Sub: x = l - r; break;
        case BinOp::Mul: x = l * r; break;
        case BinOp::Div:
          if (r == 0.0) fail(Errc::DivisionByZero, "division by zero");
          x = l / r;
          break;
        case BinOp::Pow:
          if (l == 0.0 && r < 0.0) fail(Errc::DomainError, "0 raised to a negative power");
          if (l < 0.0 && r != std::trunc(r))
            fail(Errc::DomainError, "negative base with non-integer exponent");
          x = std::pow(l, r);
          break;
      }
      if (!std::isfinite(x)) fail(Errc::NonFiniteResult, "non-finite intermediate result");
      return x;
    }
  }
  fail(Errc::InvalidArgument, "malformed expression node");
}

namespace {

int precedence(const Node& n) {
  if (n.kind != Node::Kind::Binary) return 100;
  switch (n.op) {
    case BinOp::Add:
    case BinOp::Sub: return 1;
    case BinOp::Mul:
    case BinOp::Div: return 2;
    case BinOp::Pow: return 3;
  }
  return 100;
}

void pp(const Node& n, int min_prec, std::string& out) {
  int myp = precedence(n);
  bool paren = myp < min_prec;
  if (paren) out += '(';
  switch (n.kind) {
    case Node::Kind::Number:
      out += fmt(n.number);
      break;
    case Node::Kind::Variable:
      out += n.var == Var::U ? 'u' : n.var == Var::V ? 'v' : 't';
      break;
    case Node::Kind::Call:
      out += n.fn == Fn2::Max ? "max(" : "min(";
      pp(*n.lhs, 0, out);
      out += ',';
      pp(*n.rhs, 0, out);
      out += ')';
      break;
    case Node::Kind::Binary: {
      char opc = 0;
      switch (n.op) {
        case BinOp::Add: opc = '+'; break;
        case BinOp::Sub: opc = '-'; break;
        case BinOp::Mul: opc = '*'; break;
        case BinOp::Div: opc = '/'; break;
        case BinOp::Pow: opc = '^'; break;
      }
      // Left-assoc operators parenthesize an equal-precedence right child;
      // '^' is the mirror image.
      int lp = n.op == BinOp::Pow ? myp + 1 : myp;
      int rp = n.op == BinOp::Pow ? myp : myp + 1;
      pp(*n.lhs, lp, out);
      out += opc;
      pp(*n.rhs, rp, out);
      break;
    }
  }
  if (paren) out += ')';
}

}  // namespace

std::string pretty(const Node& node) {
  std::string out;
  pp(node, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Property reports and the validation grid

const PropertyCheck* PropertyReport::find(const std::string& name) const {
  for (const auto& [k, v] : checks)
    if (k == name) return &v;
  return nullptr;
}

bool PropertyReport::passed(const std::string& name) const {
  const PropertyCheck* c = find(name);
  return c && c->verdict == Verdict::Pass;
}

bool PropertyReport::all_pass() const {
  for (const auto& [k, v] : checks)
    if (v.verdict == Verdict::Fail) return false;
  return true;
}

const ValidationGrid& ValidationGrid::instance() {
  static const ValidationGrid grid = [] {
    ValidationGrid g;
    g.axis.push_back(0.0);
    for (int k = -8; k <= 8; ++k) g.axis.push_back(std::ldexp(1.0, k));
    std::sort(g.axis.begin(), g.axis.end());

    std::mt19937_64 eng(0x51DE5EEDull);
    auto unit = [&eng] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    g.sorted_1d = g.axis;
    for (int i = 0; i < 200; ++i) {
      double a = 256.0 * (1.0 - unit());  // (0, 256]
      double b = 256.0 * (1.0 - unit());
      g.points2d.emplace_back(a, b);
      g.sorted_1d.push_back(a);
    }
    for (double u : g.axis)
      for (double v : g.axis) g.points2d.emplace_back(u, v);
    std::sort(g.sorted_1d.begin(), g.sorted_1d.end());
    g.sorted_1d.erase(std::unique(g.sorted_1d.begin(), g.sorted_1d.end()), g.sorted_1d.end());
    return g;
  }();
  return grid;
}

namespace {

using Eval2 = const std::function<double(double, double)>&;

void add_check(PropertyReport& r, const char* name, Verdict v, std::string ce = "") {
  r.checks.emplace_back(name, PropertyCheck{v, std::move(ce)});
}

// Evaluation errors raised while probing a property count as failures of
// that property, with the error text as the counterexample.
template <typename Fn>
void guarded_check(PropertyReport& r, const char* name, Fn&& body) {
  Verdict v = Verdict::Pass;
  std::string ce;
  try {
    body(v, ce);
  } catch (const Error& e) {
    v = Verdict::Fail;
    ce = e.what();
  }
  add_check(r, name, v, std::move(ce));
}

// Runs the five dyadic grid certifications. Returns early with everything
// NotChecked when the function cannot be evaluated on the whole grid.
PropertyReport run_dyadic_validation(const std::string& subject,
                                     const std::function<double(double, double)>& f, Tol tol) {
  PropertyReport r;
  r.subject = subject;
  const ValidationGrid& g = ValidationGrid::instance();

  try {
    for (const auto& [u, v] : g.points2d) (void)f(u, v);
  } catch (const Error& e) {
    add_check(r, prop::evaluable, Verdict::Fail, e.what());
    add_check(r, prop::symmetric, Verdict::NotChecked);
    add_check(r, prop::monotone, Verdict::NotChecked);
    add_check(r, prop::zero_at_origin, Verdict::NotChecked);
    add_check(r, prop::homogeneous, Verdict::NotChecked);
    add_check(r, prop::zero_section_bound, Verdict::NotChecked);
    return r;
  }
  add_check(r, prop::evaluable, Verdict::Pass);

  guarded_check(r, prop::symmetric, [&](Verdict& v, std::string& ce) {
    for (const auto& [a, b] : g.points2d)
      if (!tol.eq(f(a, b), f(b, a))) {
        v = Verdict::Fail;
        ce = "f(" + fmt(a) + "," + fmt(b) + ")=" + fmt(f(a, b)) + " but f(" + fmt(b) + "," +
             fmt(a) + ")=" + fmt(f(b, a));
        return;
      }
  });

  guarded_check(r, prop::monotone, [&](Verdict& v, std::string& ce) {
    for (double w : g.axis)
      for (std::size_t i = 0; i + 1 < g.axis.size(); ++i) {
        double lo = g.axis[i], hi = g.axis[i + 1];
        if (!tol.leq(f(lo, w), f(hi, w))) {
          v = Verdict::Fail;
          ce = "first argument: f(" + fmt(lo) + "," + fmt(w) + ")=" + fmt(f(lo, w)) + " > f(" +
               fmt(hi) + "," + fmt(w) + ")=" + fmt(f(hi, w));
          return;
        }
        if (!tol.leq(f(w, lo), f(w, hi))) {
          v = Verdict::Fail;
          ce = "second argument: f(" + fmt(w) + "," + fmt(lo) + ")=" + fmt(f(w, lo)) + " > f(" +
               fmt(w) + "," + fmt(hi) + ")=" + fmt(f(w, hi));
          return;
        }
      }
  });

  guarded_check(r, prop::zero_at_origin, [&](Verdict& v, std::string& ce) {
    double origin = f(0.0, 0.0);
    if (!tol.eq(origin, 0.0)) {
      v = Verdict::Fail;
      ce = "f(0,0)=" + fmt(origin);
    }
  });

  guarded_check(r, prop::homogeneous, [&](Verdict& v, std::string& ce) {
    for (double k : {0.5, 2.0, 3.0})
      for (const auto& [a, b] : g.points2d) {
        double lhs = k * f(a, b), rhs = f(k * a, k * b);
        if (!tol.eq(lhs, rhs)) {
          v = Verdict::Fail;
          ce = "k=" + fmt(k) + ", (u,v)=(" + fmt(a) + "," + fmt(b) + "): k*f=" + fmt(lhs) +
               " but f(ku,kv)=" + fmt(rhs);
          return;
        }
      }
  });

  guarded_check(r, prop::zero_section_bound, [&](Verdict& v, std::string& ce) {
    for (double a : g.sorted_1d) {
      if (a <= 0.0) continue;
      if (!tol.leq(a, f(0.0, a))) {
        v = Verdict::Fail;
        ce = "a=" + fmt(a) + " > f(0,a)=" + fmt(f(0.0, a));
        return;
      }
    }
  });
  return r;
}

PropertyReport run_monadic_validation(const std::string& subject,
                                      const std::function<double(double)>& h, Tol tol) {
  PropertyReport r;
  r.subject = subject;
  const ValidationGrid& g = ValidationGrid::instance();

  try {
    for (double t : g.sorted_1d) (void)h(t);
  } catch (const Error& e) {
    add_check(r, prop::evaluable, Verdict::Fail, e.what());
    add_check(r, prop::zero_at_zero, Verdict::NotChecked);
    add_check(r, prop::strictly_increasing, Verdict::NotChecked);
    add_check(r, prop::growth, Verdict::NotChecked);
    return r;
  }
  add_check(r, prop::evaluable, Verdict::Pass);

  guarded_check(r, prop::zero_at_zero, [&](Verdict& v, std::string& ce) {
    double at0 = h(0.0);
    if (!tol.eq(at0, 0.0)) {
      v = Verdict::Fail;
      ce = "eta(0)=" + fmt(at0);
    }
  });

  guarded_check(r, prop::strictly_increasing, [&](Verdict& v, std::string& ce) {
    for (std::size_t i = 0; i + 1 < g.sorted_1d.size(); ++i) {
      double lo = g.sorted_1d[i], hi = g.sorted_1d[i + 1];
      if (!(h(hi) - h(lo) > 0.0)) {
        v = Verdict::Fail;
        ce = "eta(" + fmt(lo) + ")=" + fmt(h(lo)) + " >= eta(" + fmt(hi) + ")=" + fmt(h(hi));
        return;
      }
    }
  });

  guarded_check(r, prop::growth, [&](Verdict& v, std::string& ce) {
    double top = h(g.sorted_1d.back());
    if (!(top > 1.0)) {
      v = Verdict::Fail;
      ce = "eta(" + fmt(g.sorted_1d.back()) + ")=" + fmt(top) + " <= 1";
    }
  });
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// DyadicFunction / MonadicControl

DyadicFunction::DyadicFunction(Tag tag, double param, NodePtr expr, Tol tol)
    : tag_(tag), param_(param), expr_(std::move(expr)) {
  switch (tag_) {
    case Tag::Sum: text_ = "u+v"; break;
    case Tag::Max: text_ = "max(u,v)"; break;
    case Tag::Product: text_ = "u*v"; break;
    case Tag::ScaledSum: text_ = fmt(param_) + "*(u+v)"; break;
    case Tag::Hyperbolic: text_ = "2*" + fmt(param_) + "+max(u,v)"; break;
    case Tag::PowerSum: text_ = "u^" + fmt(param_) + "+v^" + fmt(param_); break;
    case Tag::Expr: text_ = pretty(*expr_); break;
  }
  report_ = run_dyadic_validation(text_, [this](double u, double v) { return (*this)(u, v); }, tol);
}

DyadicFunction DyadicFunction::parse(const std::string& text, Tol tol) {
  return DyadicFunction(Tag::Expr, 0.0, dsl::parse(text, Arity::Dyadic), tol);
}
DyadicFunction DyadicFunction::sum() { return DyadicFunction(Tag::Sum, 0.0, nullptr, {}); }
DyadicFunction DyadicFunction::max() { return DyadicFunction(Tag::Max, 0.0, nullptr, {}); }
DyadicFunction DyadicFunction::product() { return DyadicFunction(Tag::Product, 0.0, nullptr, {}); }
DyadicFunction DyadicFunction::scaled_sum(double k, Tol tol) {
  if (!(k > 0.0)) fail(Errc::InvalidArgument, "scaled_sum needs k > 0");
  return DyadicFunction(Tag::ScaledSum, k, nullptr, tol);
}
DyadicFunction DyadicFunction::hyperbolic(double delta, Tol tol) {
  if (delta < 0.0) fail(Errc::InvalidArgument, "hyperbolic needs delta >= 0");
  return DyadicFunction(Tag::Hyperbolic, delta, nullptr, tol);
}
DyadicFunction DyadicFunction::power_sum(double q, Tol tol) {
  if (!(q > 0.0)) fail(Errc::InvalidArgument, "power_sum needs q > 0");
  return DyadicFunction(Tag::PowerSum, q, nullptr, tol);
}

double DyadicFunction::operator()(double u, double v) const {
  switch (tag_) {
    case Tag::Sum: return u + v;
    case Tag::Max: return std::max(u, v);
    case Tag::Product: return u * v;
    case Tag::ScaledSum: return param_ * (u + v);
    case Tag::Hyperbolic: return 2.0 * param_ + std::max(u, v);
    case Tag::PowerSum: return std::pow(u, param_) + std::pow(v, param_);
    case Tag::Expr: {
      Bindings b;
      b.u = u;
      b.v = v;
      return eval(*expr_, b);
    }
  }
  fail(Errc::InvalidArgument, "bad function tag");
}

MonadicControl::MonadicControl(Tag tag, double a, double b, NodePtr expr, Tol tol)
    : tag_(tag), a_(a), b_(b), expr_(std::move(expr)) {
  switch (tag_) {
    case Tag::Identity: text_ = "t"; break;
    case Tag::Power: text_ = "t^" + fmt(a_); break;
    case Tag::Affine: text_ = fmt(a_) + "*t+" + fmt(b_); break;
    case Tag::Expr: text_ = pretty(*expr_); break;
  }
  report_ = run_monadic_validation(text_, [this](double t) { return (*this)(t); }, tol);
}

MonadicControl MonadicControl::parse(const std::string& text, Tol tol) {
  return MonadicControl(Tag::Expr, 0.0, 0.0, dsl::parse(text, Arity::Monadic), tol);
}
MonadicControl MonadicControl::identity() { return MonadicControl(Tag::Identity, 1.0, 0.0, nullptr, {}); }
MonadicControl MonadicControl::power(double alpha, Tol tol) {
  if (!(alpha > 0.0)) fail(Errc::AlphaOutOfRange, "power control needs alpha > 0");
  return MonadicControl(Tag::Power, alpha, 0.0, nullptr, tol);
}
MonadicControl MonadicControl::affine(double a, double b, Tol tol) {
  return MonadicControl(Tag::Affine, a, b, nullptr, tol);
}

double MonadicControl::operator()(double t) const {
  switch (tag_) {
    case Tag::Identity: return t;
    case Tag::Power: return t == 0.0 ? 0.0 : std::pow(t, a_);
    case Tag::Affine: return a_ * t + b_;
    case Tag::Expr: {
      Bindings b;
      b.t = t;
      return eval(*expr_, b);
    }
  }
  fail(Errc::InvalidArgument, "bad control tag");
}

bool MonadicControl::validated() const {
  return report_.passed(prop::zero_at_zero) && report_.passed(prop::strictly_increasing) &&
         report_.passed(prop::growth);
}

const PropertyReport& validate_dyadic(const DyadicFunction& f) { return f.report(); }
const PropertyReport& validate_control(const MonadicControl& eta) { return eta.report(); }

PropertyReport validate_pair(const DyadicFunction& phi, const DyadicFunction& psi,
                             const Space& space, Tol tol) {
  PropertyReport r;
  r.subject = "phi=" + phi.text() + ", psi=" + psi.text();
  const ValidationGrid& g = ValidationGrid::instance();

  guarded_check(r, prop::zero_section_dominates, [&](Verdict& v, std::string& ce) {
    for (double a : g.sorted_1d) {
      if (a <= 0.0) continue;
      if (!tol.leq(psi(0.0, a), phi(0.0, a))) {
        v = Verdict::Fail;
        ce = "a=" + fmt(a) + ": psi(0,a)=" + fmt(psi(0.0, a)) + " > phi(0,a)=" + fmt(phi(0.0, a));
        return;
      }
    }
  });

  guarded_check(r, prop::triangle_on_space, [&](Verdict& v, std::string& ce) {
    std::size_t n = space.size();
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z) {
          double lhs = space(x, y), rhs = psi(space(x, z), space(y, z));
          if (!tol.leq(lhs, rhs)) {
            v = Verdict::Fail;
            ce = "triple (" + space.label(x) + "," + space.label(y) + "," + space.label(z) +
                 "): d(x,y)=" + fmt(lhs) + " > psi(d(x,z),d(y,z))=" + fmt(rhs);
            return;
          }
        }
  });

  // psi(a/b, c/d) * psi(b, d) == psi(a, c) on a positive grid. The naive
  // quotient form psi(a,b)/psi(c,d) is not satisfied even by the product,
  // so the paired form is the one certified here.
  guarded_check(r, prop::ratio_multiplicative, [&](Verdict& v, std::string& ce) {
    std::vector<double> pos;
    for (double x : g.axis)
      if (x > 0.0) pos.push_back(x);
    for (double a : pos)
      for (double b : pos)
        for (double c : pos)
          for (double d : pos) {
            double lhs = psi(a / b, c / d) * psi(b, d), rhs = psi(a, c);
            if (!tol.eq(lhs, rhs)) {
              v = Verdict::Fail;
              ce = "(a,b,c,d)=(" + fmt(a) + "," + fmt(b) + "," + fmt(c) + "," + fmt(d) +
                   "): psi(a/b,c/d)*psi(b,d)=" + fmt(lhs) + " but psi(a,c)=" + fmt(rhs);
              return;
            }
          }
  });
  return r;
}

}  // namespace quadmet::dsl
