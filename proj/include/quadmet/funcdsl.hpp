#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "quadmet/space.hpp"
#include "quadmet/tolerance.hpp"

namespace quadmet::dsl {

// Expression language for the two-argument functions (variables u, v) and
// one-argument controls (variable t):
//
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := atom ("^" factor)?
//   atom   := NUMBER | IDENT | IDENT "(" expr "," expr ")" | "(" expr ")"
//
// IDENT is one of u, v, t, max, min; NUMBER is a nonnegative decimal
// literal. '^' binds tightest and associates right; whitespace is
// insignificant.

enum class Var { U, V, T };
enum class BinOp { Add, Sub, Mul, Div, Pow };
enum class Fn2 { Max, Min };
enum class Arity { Dyadic, Monadic };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { Number, Variable, Binary, Call };
  Kind kind = Kind::Number;
  double number = 0.0;
  Var var = Var::U;
  BinOp op = BinOp::Add;
  Fn2 fn = Fn2::Max;
  NodePtr lhs, rhs;
};

struct Bindings {
  double u = 0.0, v = 0.0, t = 0.0;
};

// Errors carry the byte offset of the offending token.
NodePtr parse(const std::string& text, Arity arity);
inline NodePtr parse_dyadic(const std::string& text) { return parse(text, Arity::Dyadic); }
inline NodePtr parse_monadic(const std::string& text) { return parse(text, Arity::Monadic); }

double eval(const Node& node, const Bindings& bindings);

// Prints an expression that parses back to the identical tree.
std::string pretty(const Node& node);

enum class Verdict { Pass, Fail, NotChecked };

struct PropertyCheck {
  Verdict verdict = Verdict::NotChecked;
  std::string counterexample;  // empty unless verdict == Fail
};

struct PropertyReport {
  std::string subject;
  std::vector<std::pair<std::string, PropertyCheck>> checks;

  const PropertyCheck* find(const std::string& name) const;
  bool passed(const std::string& name) const;
  bool all_pass() const;  // no Fail verdict among the checked properties
};

// Property names used by the validation reports.
namespace prop {
inline constexpr const char* evaluable = "evaluable";
inline constexpr const char* symmetric = "symmetric";
inline constexpr const char* monotone = "monotone";
inline constexpr const char* zero_at_origin = "zero_at_origin";
inline constexpr const char* homogeneous = "homogeneous";
inline constexpr const char* zero_section_bound = "zero_section_bound";  // a <= f(0,a)
inline constexpr const char* zero_section_dominates = "zero_section_dominates";  // psi(0,a) <= phi(0,a)
inline constexpr const char* triangle_on_space = "triangle_on_space";
inline constexpr const char* ratio_multiplicative = "ratio_multiplicative";
inline constexpr const char* zero_at_zero = "zero_at_zero";
inline constexpr const char* strictly_increasing = "strictly_increasing";
inline constexpr const char* growth = "growth";
inline constexpr const char* power_subadditive = "power_subadditive";
}  // namespace prop

// The finite certification grid shared by all property validators:
// {0} u {2^k : k = -8..8} per axis plus 200 seeded random points in
// (0, 256] (one- and two-dimensional variants).
struct ValidationGrid {
  std::vector<double> axis;                         // sorted, includes 0
  std::vector<double> sorted_1d;                    // axis u random singles, sorted
  std::vector<std::pair<double, double>> points2d;  // axis x axis u random pairs
  static const ValidationGrid& instance();
};

// A two-argument function: either a named builtin or a parsed expression.
// Properties are certified on the validation grid at construction time;
// the flags gate the operations that require them.
class DyadicFunction {
 public:
  static DyadicFunction parse(const std::string& text, Tol tol = {});
  static DyadicFunction sum();
  static DyadicFunction max();
  static DyadicFunction product();
  static DyadicFunction scaled_sum(double k, Tol tol = {});
  static DyadicFunction hyperbolic(double delta, Tol tol = {});  // 2*delta + max(u,v)
  static DyadicFunction power_sum(double q, Tol tol = {});       // u^q + v^q

  double operator()(double u, double v) const;
  const std::string& text() const { return text_; }
  const PropertyReport& report() const { return report_; }
  bool has(const std::string& property) const { return report_.passed(property); }

 private:
  enum class Tag { Sum, Max, Product, ScaledSum, Hyperbolic, PowerSum, Expr };
  DyadicFunction(Tag tag, double param, NodePtr expr, Tol tol);

  Tag tag_;
  double param_ = 0.0;
  NodePtr expr_;
  std::string text_;
  PropertyReport report_;
};

// A one-argument control function (candidate homeomorphism of [0,inf)).
class MonadicControl {
 public:
  static MonadicControl parse(const std::string& text, Tol tol = {});
  static MonadicControl identity();
  static MonadicControl power(double alpha, Tol tol = {});          // t^alpha
  static MonadicControl affine(double a, double b, Tol tol = {});   // a*t + b

  double operator()(double t) const;
  const std::string& text() const { return text_; }
  const PropertyReport& report() const { return report_; }
  // zero at zero, strictly increasing on the grid, and grows past 1.
  bool validated() const;

 private:
  enum class Tag { Identity, Power, Affine, Expr };
  MonadicControl(Tag tag, double a, double b, NodePtr expr, Tol tol);

  Tag tag_;
  double a_ = 1.0, b_ = 0.0;
  NodePtr expr_;
  std::string text_;
  PropertyReport report_;
};

// Grid certification reports. validate_dyadic/validate_control return the
// report frozen at construction; validate_pair additionally checks the
// pair conditions against a concrete space (an exhaustive triple scan for
// the triangle-function condition).
const PropertyReport& validate_dyadic(const DyadicFunction& f);
const PropertyReport& validate_control(const MonadicControl& eta);
PropertyReport validate_pair(const DyadicFunction& phi, const DyadicFunction& psi,
                             const Space& space, Tol tol = {});

}  // namespace quadmet::dsl
