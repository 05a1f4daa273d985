#pragma once

// Coefficient functions: a tiny expression language over one variable, nonnegative
// weights built on it, and quadrature of exponentially flat integrands.
//
// Grammar (whitespace ignored):
//
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = ("-" | "+") unary | power ;
//   power   = primary [ "^" unary ] ;                 (* right associative *)
//   primary = number | name | func "(" args ")" | "(" expr ")" ;
//   func    = "abs" | "exp" | "log" | "min" | "max" ;  (* min/max take two args *)
//   name    = the single variable | "e" | "pi" ;
//   number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;

#include <hypolab/error.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hypolab::coeff {

namespace detail {
struct Node;
}

/// Immutable parsed expression over (at most) one variable.
class Expr {
 public:
  /// Parses `source`; the variable may be any name in `variables` (at most one of them may appear).
  static Expr parse(std::string_view source, std::span<const std::string_view> variables);
  static Expr parse(std::string_view source, std::string_view variable = "y");
  static Expr constant(double value);

  double eval(double v) const;
  /// Canonical pretty-printed form; parse(to_string()) reproduces the same tree.
  std::string to_string() const;
  /// Name of the variable that occurs, empty for constant expressions.
  const std::string& variable() const noexcept { return variable_; }
  bool is_constant() const noexcept { return variable_.empty(); }
  /// If the top-level node is exp(g), returns g.
  std::optional<Expr> exp_argument() const;
  /// log of the expression built symbolically when it is exp(g), or a product, quotient or
  /// constant power of positive constants and exp(.) factors; exp(g) yields exactly g.
  std::optional<Expr> log_expression() const;

 private:
  struct Instr {
    enum class Op : std::uint8_t { push, var, neg, add, sub, mul, div, pow, abs, exp, log, min, max } op;
    double value = 0.0;
  };
  explicit Expr(std::shared_ptr<const detail::Node> root, std::string variable);
  void compile();

  std::shared_ptr<const detail::Node> root_;
  std::string variable_;
  std::vector<Instr> program_;
  std::size_t stack_depth_ = 0;
};

struct Domain {
  double lo = -1.0;
  double hi = 1.0;
  bool contains(double y) const noexcept { return y >= lo && y <= hi; }
};

enum class Parity { even, none };
enum class Monotone { nonneg_increasing_on_positive_axis, none };

/// Values below this threshold are reported as exactly zero by eval.
inline constexpr double underflow_floor = 1e-300;

/// Nonnegative weight a(y) or g(x).
class CoeffFn {
 public:
  CoeffFn(Expr expr, Domain domain);

  double eval(double y) const;
  /// log a(y); uses the symbolic log form when available so that it stays
  /// meaningful where a(y) underflows. Returns -inf where a vanishes.
  double log_eval(double y) const;

  const Expr& expr() const noexcept { return expr_; }
  const std::optional<Expr>& log_form() const noexcept { return log_form_; }
  Parity parity() const noexcept { return parity_; }
  Monotone monotone() const noexcept { return monotone_; }
  Domain domain() const noexcept { return domain_; }
  std::string source() const { return expr_.to_string(); }

 private:
  void check_domain(double y) const;

  Expr expr_;
  std::optional<Expr> log_form_;
  Domain domain_;
  Parity parity_ = Parity::none;
  Monotone monotone_ = Monotone::none;
};

/// Parses a weight and rejects it if it is negative or non-finite on a 1001-point scan of `domain`.
CoeffFn parse_coeff(std::string_view source, Domain domain = {}, std::string_view variable = "y");

double eval_at(const CoeffFn& f, double y);

/// Which coordinate a spatial or space-time coefficient field depends on.
enum class Arg { x1, x2, radius, t };

/// Signed coefficient field over (x1, x2, t) depending on at most one of x1, x2, |x| or t.
/// Variable names: x or x1, x2, r (Euclidean radius), t.
class Field {
 public:
  Field(double value = 0.0);  // NOLINT: implicit from constants
  static Field parse(std::string_view source);

  double operator()(double x1, double x2 = 0.0, double t = 0.0) const;
  std::string source() const { return expr_.to_string(); }
  bool is_constant() const noexcept { return expr_.is_constant(); }
  Arg arg() const noexcept { return arg_; }

 private:
  Field(Expr expr, Arg arg) : expr_(std::move(expr)), arg_(arg) {}
  Expr expr_;
  Arg arg_ = Arg::x1;
};

class Interval {
 public:
  Interval(double center, double half_width);
  static Interval from_bounds(double lo, double hi);

  double center() const noexcept { return center_; }
  double half_width() const noexcept { return half_width_; }
  double lo() const noexcept { return center_ - half_width_; }
  double hi() const noexcept { return center_ + half_width_; }
  double length() const noexcept { return 2.0 * half_width_; }
  /// Same center, three times the length.
  Interval tripled() const { return {center_, 3.0 * half_width_}; }
  bool contains(const Interval& other) const noexcept { return other.lo() >= lo() && other.hi() <= hi(); }

 private:
  double center_;
  double half_width_;
};

/// Natural log of the integral of f over I (-inf when the integral vanishes).
/// Relative accuracy `tol`; integrates exp(log f - max log f) so the scale survives underflow.
double log_interval_integral(const CoeffFn& f, const Interval& I, double tol = 1e-10);
double interval_integral(const CoeffFn& f, const Interval& I, double tol = 1e-10);

/// Signed integral of f over [a, b] (b < a flips the sign); the error estimate is held
/// below tol times the integral of |f|.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

}  // namespace hypolab::coeff
