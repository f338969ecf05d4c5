#pragma once

#include "roughweyl/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace roughweyl {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

// Measurable metric tensor in chart coordinates, sampled pointwise.
// c_lo/c_hi are the declared comparability constants against the chart
// Euclidean metric: c_lo^2 |v|^2 <= v^T G(x) v <= c_hi^2 |v|^2 a.e.
struct MetricField {
  std::function<Mat2(const Point&)> eval;
  double c_lo = 1.0;
  double c_hi = 1.0;
  std::vector<Point> singular_points;
  std::string name;

  // Evaluates G(x); throws ModelingError at a declared singular point.
  Mat2 operator()(const Point& x) const;
};

// Measurable weight rho. beta is the declared integrability exponent and
// must exceed n/2 = 1.
struct WeightField {
  std::function<double(const Point&)> eval;
  double beta = std::numeric_limits<double>::infinity();
  bool nonzero_mean_required = false;
  std::string name;

  double operator()(const Point& x) const { return eval(x); }
};

// Throws ModelingError unless G is symmetric and its spectrum lies in
// [c_lo^2, c_hi^2] (relative tolerance `tol`).
void audit_comparability(const MetricField& g, const Mat2& G, const Point& x, double tol = 1e-9);

MetricField euclidean_metric();

// G = I + grad f grad f^T of the graph x -> (x, f(x)); `lipschitz` bounds |grad f|.
MetricField lipschitz_graph_metric(std::function<Vec2(const Point&)> grad_f, double lipschitz);

// Graph metric of f(x) = 1 - |x| over the unit disk; det G = 2 away from the tip.
MetricField graph_cone_metric();

// csc^2(alpha/2) dr^2 + r^2 dtheta^2 written in Cartesian chart coordinates.
MetricField cone_metric(double alpha);

struct MetricRegion {
  std::function<bool(const Point&)> contains;
  Mat2 g;
};

// First matching region wins; a point outside every region throws.
MetricField piecewise_metric(std::vector<MetricRegion> regions, std::string name = "piecewise");

// c * G for a constant c > 0.
MetricField scaled_metric(const MetricField& base, double c);

// G'(x) = J(x)^T G(phi(x)) J(x). sigma_lo/sigma_hi bound the singular values of J.
MetricField pullback_metric(const MetricField& base, std::function<Point(const Point&)> phi,
                            std::function<Mat2(const Point&)> jacobian, double sigma_lo, double sigma_hi);

WeightField constant_weight(double value);
// value_left for x < split, value_right otherwise.
WeightField halves_weight(double value_left, double value_right, double split = 0.5);
// n x n checkerboard over [x0,x1] x [y0,y1]; cell (0,0) carries a.
WeightField checkerboard_weight(int n, double a, double b, double x0 = 0.0, double x1 = 1.0, double y0 = 0.0,
                                double y1 = 1.0);
WeightField expression_weight(const std::string& expr);

// sum over cells and quadrature points of w f(x) sqrt(det G(x)) |cell|.
double measure_integral(const Mesh& m, const MetricField& g, const std::function<double(const Point&)>& f,
                        int quad_order = 2);

} // namespace roughweyl
