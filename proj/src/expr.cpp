#include "semigeo/expr.hpp"

#include <cctype>
#include <charconv>
#include <system_error>
#include <utility>

#include "semigeo/tensor_io.hpp"

namespace semigeo {

namespace {

using Node = FieldExpr::Node;
using NodePtr = std::shared_ptr<const Node>;
using Kind = Node::Kind;

struct FuncName {
  std::string_view name;
  Func func;
};

constexpr FuncName kFuncs[] = {
    {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},
    {"sinh", Func::Sinh}, {"cosh", Func::Cosh}, {"exp", Func::Exp},
    {"log", Func::Log},   {"sqrt", Func::Sqrt}, {"abs", Func::Abs}};

std::string_view func_name(Func f) {
  for (const auto& e : kFuncs) {
    if (e.func == f) return e.name;
  }
  return "?";
}

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

class Parser {
 public:
  Parser(std::string_view text, int n) : text_(text), n_(n) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected input");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(what, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Kind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make(Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Kind::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make(Kind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::Negate, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const auto res = std::from_chars(first, text_.data() + text_.size(), value,
                                     std::chars_format::general);
    if (res.ec != std::errc()) fail("malformed number");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    if (pos_ < text_.size() &&
        (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      pos_ = start;
      fail("implicit multiplication is not supported");
    }
    auto node = std::make_shared<Node>();
    node->kind = Kind::Number;
    node->number = value;
    return node;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name.size() >= 2 && name[0] == 'x') {
      bool digits = true;
      for (char d : name.substr(1)) digits = digits && std::isdigit(static_cast<unsigned char>(d));
      if (digits) {
        int index = 0;
        std::from_chars(name.data() + 1, name.data() + name.size(), index);
        if (index < 1 || index > n_) {
          throw VariableOutOfRange("variable " + std::string(name) +
                                   " outside x1..x" + std::to_string(n_));
        }
        auto node = std::make_shared<Node>();
        node->kind = Kind::Variable;
        node->variable = index;
        return node;
      }
    }
    for (const auto& f : kFuncs) {
      if (f.name == name) {
        if (!accept('(')) fail("expected '(' after " + std::string(name));
        NodePtr arg = expr();
        if (!accept(')')) fail("expected ')'");
        auto node = std::make_shared<Node>();
        node->kind = Kind::Call;
        node->func = f.func;
        node->lhs = std::move(arg);
        return node;
      }
    }
    throw UnknownSymbol("unknown symbol '" + std::string(name) + "'");
  }

  std::string_view text_;
  int n_;
  std::size_t pos_ = 0;
};

void print(const Node& node, std::string& out) {
  switch (node.kind) {
    case Kind::Number:
      out += format_real(node.number);
      return;
    case Kind::Variable:
      out += "x" + std::to_string(node.variable);
      return;
    case Kind::Negate:
      out += "(-";
      print(*node.lhs, out);
      out += ")";
      return;
    case Kind::Call:
      out += func_name(node.func);
      out += "(";
      print(*node.lhs, out);
      out += ")";
      return;
    default:
      break;
  }
  char op = '+';
  switch (node.kind) {
    case Kind::Sub: op = '-'; break;
    case Kind::Mul: op = '*'; break;
    case Kind::Div: op = '/'; break;
    case Kind::Pow: op = '^'; break;
    default: break;
  }
  out += "(";
  print(*node.lhs, out);
  out += op;
  print(*node.rhs, out);
  out += ")";
}

bool equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Number: return a.number == b.number;
    case Kind::Variable: return a.variable == b.variable;
    case Kind::Negate: return equal(*a.lhs, *b.lhs);
    case Kind::Call: return a.func == b.func && equal(*a.lhs, *b.lhs);
    default: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
}

}  // namespace

FieldExpr FieldExpr::constant(double value, int n) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Number;
  node->number = value;
  if (value < 0.0) {
    node->number = -value;
    return FieldExpr(make(Kind::Negate, node), n);
  }
  return FieldExpr(node, n);
}

double FieldExpr::operator()(std::span<const double> x) const {
  return evaluate<double>(x);
}

std::string FieldExpr::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

bool operator==(const FieldExpr& a, const FieldExpr& b) {
  return a.n_ == b.n_ && equal(*a.root_, *b.root_);
}

FieldExpr parse_field(std::string_view text, int n) {
  return FieldExpr(Parser(text, n).parse(), n);
}

}  // namespace semigeo
