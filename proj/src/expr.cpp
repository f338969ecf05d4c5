#include "roughweyl/expr.hpp"

#include "roughweyl/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace roughweyl {

struct Expression::Node {
  enum class Kind { Number, X, Y, R, Neg, Add, Sub, Mul, Div, Pow, Call1, Call2 };
  Kind kind = Kind::Number;
  double value = 0.0;
  double (*fn1)(double) = nullptr;
  double (*fn2)(double, double) = nullptr;
  std::shared_ptr<const Node> a, b;

  double eval(double x, double y) const {
    switch (kind) {
    case Kind::Number: return value;
    case Kind::X: return x;
    case Kind::Y: return y;
    case Kind::R: return std::hypot(x, y);
    case Kind::Neg: return -a->eval(x, y);
    case Kind::Add: return a->eval(x, y) + b->eval(x, y);
    case Kind::Sub: return a->eval(x, y) - b->eval(x, y);
    case Kind::Mul: return a->eval(x, y) * b->eval(x, y);
    case Kind::Div: return a->eval(x, y) / b->eval(x, y);
    case Kind::Pow: return std::pow(a->eval(x, y), b->eval(x, y));
    case Kind::Call1: return fn1(a->eval(x, y));
    case Kind::Call2: return fn2(a->eval(x, y), b->eval(x, y));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr number(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->value = v;
  return n;
}

double fabs1(double v) { return std::fabs(v); }
double sin1(double v) { return std::sin(v); }
double cos1(double v) { return std::cos(v); }
double sqrt1(double v) { return std::sqrt(v); }
double exp1(double v) { return std::exp(v); }
double log1(double v) { return std::log(v); }
double hypot2(double a, double b) { return std::hypot(a, b); }
double min2(double a, double b) { return std::fmin(a, b); }
double max2(double a, double b) { return std::fmax(a, b); }

class Parser {
public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse_all() {
    auto e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + std::string(s_) + "': " + what + " at position " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Kind::Add, lhs, term());
      else if (accept('-')) lhs = make(Kind::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Kind::Mul, lhs, unary());
      else if (accept('/')) lhs = make(Kind::Div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return make(Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      expect(')');
      return e;
    }
    if (c == '|') {
      ++pos_;
      auto e = expr();
      expect('|');
      auto n = make(Kind::Call1, e);
      std::const_pointer_cast<Expression::Node>(n)->fn1 = fabs1;
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return literal();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected character");
  }

  NodePtr literal() {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("bad number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return number(v);
  }

  NodePtr identifier() {
    const auto start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name(s_.substr(start, pos_ - start));
    if (name == "x") return make(Kind::X);
    if (name == "y") return make(Kind::Y);
    if (name == "r") return make(Kind::R);
    if (name == "pi") return number(std::numbers::pi);

    struct Unary {
      const char* name;
      double (*fn)(double);
    };
    static constexpr Unary unaries[] = {{"abs", fabs1}, {"sin", sin1}, {"cos", cos1},
                                        {"sqrt", sqrt1}, {"exp", exp1}, {"log", log1}};
    for (const auto& u : unaries) {
      if (name == u.name) {
        expect('(');
        auto n = std::const_pointer_cast<Expression::Node>(make(Kind::Call1, expr()));
        expect(')');
        n->fn1 = u.fn;
        return n;
      }
    }
    struct Binary {
      const char* name;
      double (*fn)(double, double);
    };
    static constexpr Binary binaries[] = {{"hypot", hypot2}, {"min", min2}, {"max", max2}};
    for (const auto& b : binaries) {
      if (name == b.name) {
        expect('(');
        auto lhs = expr();
        expect(',');
        auto rhs = expr();
        expect(')');
        auto n = std::const_pointer_cast<Expression::Node>(make(Kind::Call2, lhs, rhs));
        n->fn2 = b.fn;
        return n;
      }
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }
};

} // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.source_ = std::string(text);
  e.root_ = Parser(text).parse_all();
  return e;
}

double Expression::operator()(double x, double y) const { return root_->eval(x, y); }

} // namespace roughweyl
