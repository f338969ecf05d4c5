#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace roughweyl {

// Minimal arithmetic expression over the chart coordinates.
//
//   operators   + - * / ^ (right associative), unary minus, parentheses
//   bars        |e| is abs(e)
//   variables   x, y, r = hypot(x, y), pi
//   functions   abs sin cos sqrt exp log hypot(a,b) min(a,b) max(a,b)
//
// Parsing errors throw ConfigError with the offending position.
class Expression {
public:
  static Expression parse(std::string_view text);

  double operator()(double x, double y) const;

  const std::string& source() const { return source_; }

  struct Node;

private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

} // namespace roughweyl
