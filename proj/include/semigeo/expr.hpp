#pragma once

// Analytic scalar fields over x1..xn.
//
// Grammar (whitespace insignificant, no implicit multiplication):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | xK | func '(' expr ')' | '(' expr ')'
//
// so "-cos(x1)^2" reads as -(cos(x1)^2).

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "semigeo/error.hpp"

namespace semigeo {

enum class Func { Sin, Cos, Tan, Sinh, Cosh, Exp, Log, Sqrt, Abs };

inline double scalar_value(double v) { return v; }

class FieldExpr {
 public:
  struct Node {
    enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
    Kind kind = Kind::Number;
    double number = 0.0;
    int variable = 0;  // 1-based
    Func func = Func::Sin;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  FieldExpr() = default;
  FieldExpr(std::shared_ptr<const Node> root, int n) : root_(std::move(root)), n_(n) {}

  static FieldExpr constant(double value, int n);

  int dim() const { return n_; }
  const Node& root() const { return *root_; }

  /// Checked double evaluation: division by zero, log/sqrt outside their
  /// domain, and non-finite intermediates raise EvalError.
  double operator()(std::span<const double> x) const;

  /// Generic evaluation for any scalar type with the usual math overloads
  /// (found by ADL) and a scalar_value() accessor; same checks on values.
  template <typename T>
  T evaluate(std::span<const T> x) const {
    return eval_node<T>(*root_, x);
  }

  /// Fully parenthesised text that parses back to an equal tree.
  std::string to_string() const;

  friend bool operator==(const FieldExpr& a, const FieldExpr& b);

 private:
  template <typename T>
  static T eval_node(const Node& node, std::span<const T> x);
  template <typename T>
  static T checked(T v, const char* what) {
    if (!std::isfinite(scalar_value(v))) {
      throw EvalError(std::string("non-finite result in ") + what);
    }
    return v;
  }

  std::shared_ptr<const Node> root_;
  int n_ = 0;
};

FieldExpr parse_field(std::string_view text, int n);

inline double eval_field(const FieldExpr& expr, std::span<const double> point) {
  return expr(point);
}

template <typename T>
T FieldExpr::eval_node(const Node& node, std::span<const T> x) {
  using std::abs;
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::pow;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  using std::tan;
  using K = Node::Kind;
  switch (node.kind) {
    case K::Number:
      return T(node.number);
    case K::Variable:
      if (static_cast<std::size_t>(node.variable) > x.size()) {
        throw EvalError("point has fewer coordinates than x" +
                        std::to_string(node.variable));
      }
      return x[static_cast<std::size_t>(node.variable - 1)];
    case K::Negate:
      return -eval_node<T>(*node.lhs, x);
    case K::Add:
      return checked(eval_node<T>(*node.lhs, x) + eval_node<T>(*node.rhs, x), "+");
    case K::Sub:
      return checked(eval_node<T>(*node.lhs, x) - eval_node<T>(*node.rhs, x), "-");
    case K::Mul:
      return checked(eval_node<T>(*node.lhs, x) * eval_node<T>(*node.rhs, x), "*");
    case K::Div: {
      const T num = eval_node<T>(*node.lhs, x);
      const T den = eval_node<T>(*node.rhs, x);
      if (scalar_value(den) == 0.0) throw EvalError("division by zero");
      return checked(num / den, "/");
    }
    case K::Pow: {
      const T base = eval_node<T>(*node.lhs, x);
      if (node.rhs->kind == K::Number) {
        if (scalar_value(base) == 0.0 && node.rhs->number < 0.0) {
          throw EvalError("division by zero in ^");
        }
        return checked(pow(base, node.rhs->number), "^");
      }
      return checked(pow(base, eval_node<T>(*node.rhs, x)), "^");
    }
    case K::Call: {
      const T a = eval_node<T>(*node.lhs, x);
      switch (node.func) {
        case Func::Sin: return checked(sin(a), "sin");
        case Func::Cos: return checked(cos(a), "cos");
        case Func::Tan: return checked(tan(a), "tan");
        case Func::Sinh: return checked(sinh(a), "sinh");
        case Func::Cosh: return checked(cosh(a), "cosh");
        case Func::Exp: return checked(exp(a), "exp");
        case Func::Log:
          if (!(scalar_value(a) > 0.0)) throw EvalError("log of non-positive argument");
          return checked(log(a), "log");
        case Func::Sqrt:
          if (!(scalar_value(a) >= 0.0)) throw EvalError("sqrt of negative argument");
          return checked(sqrt(a), "sqrt");
        case Func::Abs: return abs(a);
      }
    }
  }
  throw EvalError("malformed expression tree");
}

}  // namespace semigeo
