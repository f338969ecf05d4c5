#pragma once

#include "roughweyl/assembly.hpp"
#include "roughweyl/fields.hpp"

#include <string>

namespace roughweyl {

// Text forms of the built-in fields. Parameters follow a ':' and are
// separated by ',' or ';' outside parentheses; parameter values are
// arithmetic expressions (so alpha=pi/2 works).
//
// metric:
//   euclidean
//   graph_cone                       graph of 1 - |x| over the unit disk
//   graph:fx=<expr>;fy=<expr>;L=<v>  graph of f with grad f = (fx, fy)
//   cone:alpha=<expr>
//   conformal:c=<v>                  c * identity
//   halves:left=<a>,right=<b>[,x=<s>]      a I for x < s, b I otherwise
//   checkerboard:n=<k>,a=<a>,b=<b>   k x k board of a I / b I on [0,1]^2
//   pullback:shear=<s>               phi(x,y) = (x + s min(y, 1-y), y)
//
// weight:
//   const:<v>
//   halves:<left>,<right>[,x=<s>]
//   checkerboard:n=<k>,a=<a>,b=<b>
//   expr:<expression> or a bare expression in x, y, r
//
// Errors are ConfigError with a message that does not name the key;
// callers prefix it.
MetricField parse_metric_spec(const std::string& spec);
WeightField parse_weight_spec(const std::string& spec);

// "dirichlet", "neumann", "mixed:<tag>,<tag>,..."
BoundarySpec parse_boundary_spec(const std::string& spec);

// Shear map used by "pullback:shear=s" and its Jacobian.
Point shear_map(const Point& x, double s);
Mat2 shear_jacobian(const Point& x, double s);

} // namespace roughweyl
