#pragma once

#include "roughweyl/assembly.hpp"
#include "roughweyl/fields.hpp"
#include "roughweyl/mesh.hpp"

namespace roughweyl {

// A mesh with its coefficient fields and boundary condition.
struct Problem {
  Mesh mesh;
  MetricField metric;
  WeightField weight;
  BoundarySpec bc;
  int quad_order = 2;

  Pencil assemble() const { return roughweyl::assemble(mesh, metric, weight, bc, quad_order); }
};

} // namespace roughweyl
