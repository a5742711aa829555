#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spraykit/jet.hpp"
#include "spraykit/tangent_point.hpp"

namespace spraykit {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

/// Evaluation left the domain of an expression (division by zero, sqrt or
/// log of a non-positive value).
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class ExprKind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class ExprFunc { Sqrt, Sin, Cos, Exp, Log };

/// Immutable expression tree over x1..xn, y1..yn.
class Expr {
public:
  struct Node;

  Expr() = default;

  static Expr number(double v);
  /// Base coordinate x_i, 1-based.
  static Expr x(std::size_t i);
  /// Fiber coordinate y_i, 1-based.
  static Expr y(std::size_t i);
  static Expr call(ExprFunc f, Expr arg);
  static Expr pow(Expr base, double exponent);
  static Expr from_node(Node n);

  friend Expr operator-(Expr a);
  friend Expr operator+(Expr a, Expr b);
  friend Expr operator-(Expr a, Expr b);
  friend Expr operator*(Expr a, Expr b);
  friend Expr operator/(Expr a, Expr b);

  bool empty() const { return node_ == nullptr; }
  const Node& node() const { return *node_; }

  /// Largest coordinate index used (0 for constant expressions).
  std::size_t max_var_index() const;

  std::string to_string() const;

private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Expr::Node {
  ExprKind kind = ExprKind::Number;
  double number = 0.0;   // literal value, or exponent for Pow
  bool is_y = false;     // Var
  std::size_t index = 0; // Var, 1-based
  ExprFunc func = ExprFunc::Sqrt;
  Expr lhs;  // unary operand, call argument, or pow base
  Expr rhs;
};

/// Parses the expression grammar; variables are validated against n.
Expr parse(std::string_view text, std::size_t n);

double eval(const Expr& e, const TangentPoint& p);
Jet3 eval_jet(const Expr& e, const TangentPoint& p);

/// A spray given by its coefficient functions f^i(x, y).
struct SprayModel {
  std::size_t n = 0;
  std::vector<Expr> f;

  static SprayModel parse(std::size_t n, std::span<const std::string> coefficients);
};

/// A scalar function with a declared homogeneity degree in y.
struct ScalarModel {
  std::size_t n = 0;
  Expr expr;
  int degree = 1;

  static ScalarModel parse(std::size_t n, std::string_view text, int degree = 1);
};

struct HomogeneityReport {
  double max_residual = 0.0;
  /// max over samples of residual / (|g| + 1)
  double max_scaled_residual = 0.0;
  std::size_t worst_sample = 0;
  bool pass = true;
};

/// Euler residual |y^i dg/dy^i - k g| over the samples; tolerance scales
/// with |g| + 1 at each sample.
HomogeneityReport homogeneity_check(const ScalarModel& m, std::span<const TangentPoint> samples,
                                    double tol = 1e-9);
/// Applies the degree-2 check to every coefficient of the spray.
HomogeneityReport homogeneity_check(const SprayModel& m, std::span<const TangentPoint> samples,
                                    double tol = 1e-9);

}  // namespace spraykit
