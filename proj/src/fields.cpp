#include "roughweyl/fields.hpp"

#include "roughweyl/errors.hpp"
#include "roughweyl/expr.hpp"
#include "roughweyl/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace roughweyl {

namespace {

constexpr double kSingularRadius = 1e-14;

std::string point_str(const Point& x) {
  std::ostringstream os;
  os << "(" << x.x() << ", " << x.y() << ")";
  return os.str();
}

} // namespace

Mat2 MetricField::operator()(const Point& x) const {
  for (const auto& s : singular_points) {
    if ((x - s).norm() <= kSingularRadius)
      throw ModelingError("metric '" + name + "' evaluated at singular point " + point_str(x));
  }
  return eval(x);
}

void audit_comparability(const MetricField& g, const Mat2& G, const Point& x, double tol) {
  const double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
  if (!G.allFinite()) throw ModelingError("metric '" + g.name + "' is not finite at " + point_str(x));
  if (std::abs(G(0, 1) - G(1, 0)) > 1e-12 * scale)
    throw ModelingError("metric '" + g.name + "' is not symmetric at " + point_str(x));
  Eigen::SelfAdjointEigenSolver<Mat2> es(G, Eigen::EigenvaluesOnly);
  const double lo = g.c_lo * g.c_lo, hi = g.c_hi * g.c_hi;
  const double slack = tol * std::max(1.0, hi);
  if (es.eigenvalues()(0) < lo - slack || es.eigenvalues()(1) > hi + slack) {
    std::ostringstream os;
    os << "comparability violated for metric '" << g.name << "' at " << point_str(x) << ": eigenvalues ["
       << es.eigenvalues()(0) << ", " << es.eigenvalues()(1) << "] outside [" << lo << ", " << hi << "]";
    throw ModelingError(os.str());
  }
}

MetricField euclidean_metric() {
  MetricField g;
  g.eval = [](const Point&) -> Mat2 { return Mat2::Identity(); };
  g.name = "euclidean";
  return g;
}

MetricField lipschitz_graph_metric(std::function<Vec2(const Point&)> grad_f, double lipschitz) {
  MetricField g;
  g.eval = [grad_f = std::move(grad_f)](const Point& x) -> Mat2 {
    const Vec2 d = grad_f(x);
    if (!d.allFinite()) throw ModelingError("graph metric: non-finite gradient at " + point_str(x));
    return Mat2::Identity() + d * d.transpose();
  };
  g.c_lo = 1.0;
  g.c_hi = std::sqrt(1.0 + lipschitz * lipschitz);
  g.name = "graph";
  return g;
}

MetricField graph_cone_metric() {
  // f(x) = 1 - |x|, grad f = -x/|x|; undefined only at the tip.
  auto g = lipschitz_graph_metric([](const Point& x) -> Vec2 { return -x / x.norm(); }, 1.0);
  g.singular_points = {Point::Zero()};
  g.name = "graph_cone";
  return g;
}

MetricField cone_metric(double alpha) {
  if (!(alpha > 0.0 && alpha <= std::numbers::pi))
    throw ModelingError("cone metric: alpha must lie in (0, pi]");
  const double csc = 1.0 / std::sin(alpha / 2.0);
  MetricField g;
  g.eval = [csc2 = csc * csc](const Point& x) -> Mat2 {
    const Vec2 e = x / x.norm();
    const Mat2 radial = e * e.transpose();
    return csc2 * radial + (Mat2::Identity() - radial);
  };
  g.c_lo = 1.0;
  g.c_hi = csc;
  g.singular_points = {Point::Zero()};
  std::ostringstream os;
  os.precision(17);
  os << "cone:alpha=" << alpha;
  g.name = os.str();
  return g;
}

MetricField piecewise_metric(std::vector<MetricRegion> regions, std::string name) {
  if (regions.empty()) throw ModelingError("piecewise metric needs at least one region");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& r : regions) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(r.g, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) <= 0.0) throw ModelingError("piecewise metric: region matrix is not SPD");
    lo = std::min(lo, es.eigenvalues()(0));
    hi = std::max(hi, es.eigenvalues()(1));
  }
  MetricField g;
  g.eval = [regions = std::move(regions)](const Point& x) -> Mat2 {
    for (const auto& r : regions)
      if (r.contains(x)) return r.g;
    throw ModelingError("piecewise metric: point " + point_str(x) + " matches no region");
  };
  g.c_lo = std::sqrt(lo);
  g.c_hi = std::sqrt(hi);
  g.name = std::move(name);
  return g;
}

MetricField scaled_metric(const MetricField& base, double c) {
  if (!(c > 0.0)) throw ModelingError("scaled metric: factor must be positive");
  MetricField g;
  g.eval = [base, c](const Point& x) -> Mat2 { return c * base(x); };
  g.c_lo = base.c_lo * std::sqrt(c);
  g.c_hi = base.c_hi * std::sqrt(c);
  g.singular_points = base.singular_points;
  std::ostringstream os;
  os.precision(17);
  os << base.name << "*" << c;
  g.name = os.str();
  return g;
}

MetricField pullback_metric(const MetricField& base, std::function<Point(const Point&)> phi,
                            std::function<Mat2(const Point&)> jacobian, double sigma_lo, double sigma_hi) {
  MetricField g;
  g.eval = [base, phi = std::move(phi), jacobian = std::move(jacobian)](const Point& x) -> Mat2 {
    const Mat2 J = jacobian(x);
    const double det = J.determinant();
    if (!std::isfinite(det) || std::abs(det) <= 1e-14 * std::max(1.0, J.cwiseAbs().maxCoeff()))
      throw ModelingError("pullback metric: singular Jacobian at " + point_str(x));
    const Mat2 G = J.transpose() * base(phi(x)) * J;
    return 0.5 * (G + G.transpose());
  };
  g.c_lo = base.c_lo * sigma_lo;
  g.c_hi = base.c_hi * sigma_hi;
  g.name = "pullback(" + base.name + ")";
  return g;
}

WeightField constant_weight(double value) {
  WeightField w;
  w.eval = [value](const Point&) { return value; };
  std::ostringstream os;
  os.precision(17);
  os << "const:" << value;
  w.name = os.str();
  return w;
}

WeightField halves_weight(double value_left, double value_right, double split) {
  WeightField w;
  w.eval = [=](const Point& x) { return x.x() < split ? value_left : value_right; };
  std::ostringstream os;
  os.precision(17);
  os << "halves:" << value_left << "," << value_right << ",x=" << split;
  w.name = os.str();
  return w;
}

WeightField checkerboard_weight(int n, double a, double b, double x0, double x1, double y0, double y1) {
  if (n < 1) throw ModelingError("checkerboard weight: n must be >= 1");
  WeightField w;
  w.eval = [=](const Point& x) {
    const int i = std::clamp(static_cast<int>(std::floor((x.x() - x0) / (x1 - x0) * n)), 0, n - 1);
    const int j = std::clamp(static_cast<int>(std::floor((x.y() - y0) / (y1 - y0) * n)), 0, n - 1);
    return (i + j) % 2 == 0 ? a : b;
  };
  std::ostringstream os;
  os.precision(17);
  os << "checkerboard:n=" << n << ",a=" << a << ",b=" << b;
  w.name = os.str();
  return w;
}

WeightField expression_weight(const std::string& expr) {
  auto e = Expression::parse(expr);
  WeightField w;
  w.eval = [e](const Point& x) { return e(x.x(), x.y()); };
  w.name = expr;
  return w;
}

double measure_integral(const Mesh& m, const MetricField& g, const std::function<double(const Point&)>& f,
                        int quad_order) {
  const auto rule = triangle_rule(quad_order);
  double total = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    const Point &p0 = m.vertices[tri[0]], &p1 = m.vertices[tri[1]], &p2 = m.vertices[tri[2]];
    const double area = m.signed_area(t);
    double cell = 0.0;
    for (const auto& q : rule) {
      const Point x = map_to_cell(p0, p1, p2, q);
      const Mat2 G = g(x);
      cell += q.w * f(x) * std::sqrt(G.determinant());
    }
    total += cell * area;
  }
  return total;
}

} // namespace roughweyl
