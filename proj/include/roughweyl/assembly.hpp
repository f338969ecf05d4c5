#pragma once

#include "roughweyl/fields.hpp"
#include "roughweyl/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace roughweyl {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Admissible boundary subspace, selected by boundary edge tags.
struct BoundarySpec {
  enum class Kind { Dirichlet, Neumann, Mixed };

  Kind kind = Kind::Dirichlet;
  std::set<int> dirichlet_tags; // Mixed only

  static BoundarySpec dirichlet() { return {Kind::Dirichlet, {}}; }
  static BoundarySpec neumann() { return {Kind::Neumann, {}}; }
  static BoundarySpec mixed(std::set<int> tags) { return {Kind::Mixed, std::move(tags)}; }

  // Mixed with no tag is Neumann, Mixed covering every tag is Dirichlet.
  BoundarySpec normalized(const std::vector<int>& mesh_tags) const;

  bool is_dirichlet_tag(int tag) const;

  // "dirichlet", "neumann" or "mixed:0,2".
  std::string describe() const;

  friend bool operator==(const BoundarySpec&, const BoundarySpec&) = default;
};

// Vertex mask: 1 where the vertex touches a Dirichlet-tagged boundary edge.
std::vector<char> dirichlet_vertices(const Mesh& m, const BoundarySpec& bc);

// Assembled P1 forms on one mesh.
//
// K, Mm and R are vertex-indexed (no elimination). The *_free members are
// restrictions to the free DOFs; r is the free-DOF vector of
// int rho phi_i dmu_g, and tau = 1 exactly when no vertex is eliminated
// and constants lie in the kernel of K.
struct Pencil {
  SparseMatrix K;
  SparseMatrix Mm;
  SparseMatrix R;

  SparseMatrix K_free;
  SparseMatrix M_free;
  SparseMatrix R_free;

  std::vector<int> free_dofs;     // vertex of each free DOF
  std::vector<int> dof_of_vertex; // -1 when eliminated
  Vector r;
  int tau = 0;

  double weight_mean = 0.0; // int rho dmu_g
  double weight_abs = 0.0;  // int |rho| dmu_g
  double volume = 0.0;      // int 1 dmu_g
  // Range of rho over the sampled quadrature points. A sign that never
  // occurs makes R semidefinite, so that side of the spectrum is empty.
  double weight_min = 0.0;
  double weight_max = 0.0;

  BoundarySpec bc;
  int level = 0;
  int quad_order = 2;

  int num_free() const { return static_cast<int>(free_dofs.size()); }

  // Free-DOF vector scattered to vertices, eliminated entries set to zero.
  Vector to_vertices(const Vector& free) const;
};

struct ElementMatrices {
  Eigen::Matrix3d K;
  Eigen::Matrix3d M;
  Eigen::Matrix3d R;
  Eigen::Vector3d r;
};

ElementMatrices element_matrices(const Point& p0, const Point& p1, const Point& p2, const MetricField& g,
                                 const WeightField& w, int quad_order, bool audit = true);

Pencil assemble(const Mesh& m, const MetricField& g, const WeightField& w, const BoundarySpec& bc,
                int quad_order = 2);

// Assembly with an explicit elimination mask; `bc` is recorded for reporting.
Pencil assemble_with_mask(const Mesh& m, const MetricField& g, const WeightField& w,
                          const std::vector<char>& eliminated, const BoundarySpec& bc, int quad_order = 2);

// Rows/columns of `a` kept where dof_of_vertex >= 0.
SparseMatrix restrict_to_free(const SparseMatrix& a, const std::vector<int>& dof_of_vertex, int num_free);

// Smallest eigenvalue of K (w.r.t. Mm) on the coercivity subspace Z(rho)
// (the free space, or its rho-mean-zero part when tau = 1). This is the
// constant C of E[u,u] >= C (u,u) used by the sandwich check.
double poincare_constant(const Pencil& p);

// Coordinate text dump "i j value", one nonzero per line, column-major order.
void dump_coordinate(const SparseMatrix& a, std::ostream& os);

} // namespace roughweyl
