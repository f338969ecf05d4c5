#pragma once

#include "roughweyl/mesh.hpp"

#include <span>

namespace roughweyl {

// Point of a symmetric triangle rule in barycentric form: x = (1-l1-l2) p0 + l1 p1 + l2 p2.
// Weights sum to one; multiply by the cell area.
struct QuadPoint {
  double l1;
  double l2;
  double w;
};

// Symmetric rules exact for polynomials of the given degree: 1 (centroid),
// 2 (three interior points) and 4 (six points). Other orders throw.
std::span<const QuadPoint> triangle_rule(int order);

inline Point map_to_cell(const Point& p0, const Point& p1, const Point& p2, const QuadPoint& q) {
  return (1.0 - q.l1 - q.l2) * p0 + q.l1 * p1 + q.l2 * p2;
}

} // namespace roughweyl
