#include "roughweyl/specs.hpp"

#include "roughweyl/errors.hpp"
#include "roughweyl/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

namespace roughweyl {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// Splits on ',' or ';' at parenthesis depth zero.
std::vector<std::string> split_params(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == ',' || c == ';') && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double eval_number(const std::string& text, const std::string& what) {
  if (text.empty()) throw ConfigError(what + ": empty value");
  const auto e = Expression::parse(text);
  const double v = e(0.0, 0.0);
  if (!std::isfinite(v)) throw ConfigError(what + ": value '" + text + "' is not finite");
  return v;
}

int eval_int(const std::string& text, const std::string& what) {
  const double v = eval_number(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(what + ": '" + text + "' is not an integer");
  return static_cast<int>(v);
}

// name=value parameters; every key must be in `allowed`, every key in `required` present.
std::map<std::string, std::string> named_params(const std::string& kind, const std::string& body,
                                                const std::vector<std::string>& allowed,
                                                const std::vector<std::string>& required) {
  std::map<std::string, std::string> out;
  if (!trim(body).empty()) {
    for (const auto& item : split_params(body)) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError(kind + ": parameter '" + item + "' is not of the form name=value");
      const std::string key = trim(item.substr(0, eq));
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        throw ConfigError(kind + ": unknown parameter '" + key + "'");
      if (!out.emplace(key, trim(item.substr(eq + 1))).second)
        throw ConfigError(kind + ": parameter '" + key + "' given twice");
    }
  }
  for (const auto& r : required)
    if (!out.contains(r)) throw ConfigError(kind + " requires parameter '" + r + "'");
  return out;
}

std::pair<std::string, std::string> head_body(const std::string& spec) {
  const std::string s = trim(spec);
  const auto colon = s.find(':');
  if (colon == std::string::npos) return {s, ""};
  return {trim(s.substr(0, colon)), s.substr(colon + 1)};
}

} // namespace

Point shear_map(const Point& x, double s) { return {x.x() + s * std::min(x.y(), 1.0 - x.y()), x.y()}; }

Mat2 shear_jacobian(const Point& x, double s) {
  Mat2 J = Mat2::Identity();
  J(0, 1) = x.y() < 0.5 ? s : -s;
  return J;
}

MetricField parse_metric_spec(const std::string& spec) {
  const auto [head, body] = head_body(spec);
  if (head.empty()) throw ConfigError("empty metric spec");

  if (head == "euclidean" || head == "graph_cone") {
    if (!trim(body).empty()) throw ConfigError(head + " takes no parameters");
    return head == "euclidean" ? euclidean_metric() : graph_cone_metric();
  }
  if (head == "cone") {
    const auto p = named_params("cone", body, {"alpha"}, {"alpha"});
    const double alpha = eval_number(p.at("alpha"), "cone alpha");
    if (!(alpha > 0.0 && alpha <= std::numbers::pi + 1e-15)) throw ConfigError("cone: alpha must lie in (0, pi]");
    return cone_metric(std::min(alpha, std::numbers::pi));
  }
  if (head == "graph") {
    const auto p = named_params("graph", body, {"fx", "fy", "L"}, {"fx", "fy", "L"});
    const auto fx = Expression::parse(p.at("fx"));
    const auto fy = Expression::parse(p.at("fy"));
    const double L = eval_number(p.at("L"), "graph L");
    if (!(L >= 0.0)) throw ConfigError("graph: L must be >= 0");
    auto g = lipschitz_graph_metric([fx, fy](const Point& x) -> Vec2 { return {fx(x.x(), x.y()), fy(x.x(), x.y())}; },
                                    L);
    g.name = "graph:fx=" + p.at("fx") + ";fy=" + p.at("fy") + ";L=" + p.at("L");
    return g;
  }
  if (head == "conformal") {
    const auto p = named_params("conformal", body, {"c"}, {"c"});
    const double c = eval_number(p.at("c"), "conformal c");
    if (!(c > 0.0)) throw ConfigError("conformal: c must be > 0");
    return scaled_metric(euclidean_metric(), c);
  }
  if (head == "halves") {
    const auto p = named_params("halves", body, {"left", "right", "x"}, {"left", "right"});
    const double a = eval_number(p.at("left"), "halves left");
    const double b = eval_number(p.at("right"), "halves right");
    const double split = p.contains("x") ? eval_number(p.at("x"), "halves x") : 0.5;
    if (!(a > 0.0 && b > 0.0)) throw ConfigError("halves: scale factors must be > 0");
    std::vector<MetricRegion> regions = {
        {[split](const Point& x) { return x.x() < split; }, a * Mat2::Identity()},
        {[](const Point&) { return true; }, b * Mat2::Identity()}};
    return piecewise_metric(std::move(regions), trim(spec));
  }
  if (head == "checkerboard") {
    const auto p = named_params("checkerboard", body, {"n", "a", "b"}, {"n", "a", "b"});
    const int n = eval_int(p.at("n"), "checkerboard n");
    const double a = eval_number(p.at("a"), "checkerboard a");
    const double b = eval_number(p.at("b"), "checkerboard b");
    if (n < 1) throw ConfigError("checkerboard: n must be >= 1");
    if (!(a > 0.0 && b > 0.0)) throw ConfigError("checkerboard: scale factors must be > 0");
    auto color = [n](const Point& x) {
      const int i = std::clamp(static_cast<int>(std::floor(x.x() * n)), 0, n - 1);
      const int j = std::clamp(static_cast<int>(std::floor(x.y() * n)), 0, n - 1);
      return (i + j) % 2;
    };
    std::vector<MetricRegion> regions = {{[color](const Point& x) { return color(x) == 0; }, a * Mat2::Identity()},
                                         {[](const Point&) { return true; }, b * Mat2::Identity()}};
    return piecewise_metric(std::move(regions), trim(spec));
  }
  if (head == "pullback") {
    const auto p = named_params("pullback", body, {"shear"}, {"shear"});
    const double s = eval_number(p.at("shear"), "pullback shear");
    const double smax = 0.5 * (std::abs(s) + std::sqrt(s * s + 4.0));
    auto g = pullback_metric(
        euclidean_metric(), [s](const Point& x) { return shear_map(x, s); },
        [s](const Point& x) { return shear_jacobian(x, s); }, 1.0 / smax, smax);
    g.name = trim(spec);
    return g;
  }
  throw ConfigError("unknown metric '" + head + "'");
}

WeightField parse_weight_spec(const std::string& spec) {
  const auto [head, body] = head_body(spec);
  if (head.empty()) throw ConfigError("empty weight spec");
  if (head == "const") {
    const double v = eval_number(trim(body), "const");
    return constant_weight(v);
  }
  if (head == "halves") {
    const auto items = split_params(body);
    if (items.size() < 2 || items.size() > 3) throw ConfigError("halves expects <left>,<right>[,x=<split>]");
    const double a = eval_number(items[0], "halves left");
    const double b = eval_number(items[1], "halves right");
    double split = 0.5;
    if (items.size() == 3) {
      const auto p = named_params("halves", items[2], {"x"}, {"x"});
      split = eval_number(p.at("x"), "halves x");
    }
    return halves_weight(a, b, split);
  }
  if (head == "checkerboard") {
    const auto p = named_params("checkerboard", body, {"n", "a", "b"}, {"n", "a", "b"});
    const int n = eval_int(p.at("n"), "checkerboard n");
    if (n < 1) throw ConfigError("checkerboard: n must be >= 1");
    return checkerboard_weight(n, eval_number(p.at("a"), "checkerboard a"), eval_number(p.at("b"), "checkerboard b"));
  }
  const std::string text = head == "expr" ? trim(body) : trim(spec);
  return expression_weight(text);
}

BoundarySpec parse_boundary_spec(const std::string& spec) {
  const auto [head, body] = head_body(spec);
  if (head == "dirichlet" && trim(body).empty()) return BoundarySpec::dirichlet();
  if (head == "neumann" && trim(body).empty()) return BoundarySpec::neumann();
  if (head == "mixed") {
    std::set<int> tags;
    if (!trim(body).empty())
      for (const auto& item : split_params(body)) tags.insert(eval_int(item, "mixed tag"));
    return BoundarySpec::mixed(std::move(tags));
  }
  throw ConfigError("boundary must be dirichlet, neumann or mixed:<tags>, got '" + trim(spec) + "'");
}

} // namespace roughweyl
