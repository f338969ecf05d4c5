#include "roughweyl/assembly.hpp"

#include "roughweyl/errors.hpp"
#include "roughweyl/quadrature.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace roughweyl {

BoundarySpec BoundarySpec::normalized(const std::vector<int>& mesh_tags) const {
  if (kind != Kind::Mixed) return {kind, {}};
  bool any = false, all = true;
  for (int tag : mesh_tags) {
    if (dirichlet_tags.contains(tag)) any = true;
    else all = false;
  }
  if (!any) return neumann();
  if (all) return dirichlet();
  std::set<int> present;
  for (int tag : mesh_tags)
    if (dirichlet_tags.contains(tag)) present.insert(tag);
  return mixed(std::move(present));
}

bool BoundarySpec::is_dirichlet_tag(int tag) const {
  switch (kind) {
  case Kind::Dirichlet: return true;
  case Kind::Neumann: return false;
  case Kind::Mixed: return dirichlet_tags.contains(tag);
  }
  return false;
}

std::string BoundarySpec::describe() const {
  switch (kind) {
  case Kind::Dirichlet: return "dirichlet";
  case Kind::Neumann: return "neumann";
  case Kind::Mixed: break;
  }
  std::string s = "mixed:";
  bool first = true;
  for (int tag : dirichlet_tags) {
    if (!first) s += ',';
    s += std::to_string(tag);
    first = false;
  }
  return s;
}

std::vector<char> dirichlet_vertices(const Mesh& m, const BoundarySpec& bc) {
  std::vector<char> mask(static_cast<std::size_t>(m.num_vertices()), 0);
  for (const auto& e : m.boundary_edges) {
    if (bc.is_dirichlet_tag(e.tag)) {
      mask[e.v[0]] = 1;
      mask[e.v[1]] = 1;
    }
  }
  return mask;
}

Vector Pencil::to_vertices(const Vector& free) const {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(dof_of_vertex.size()));
  for (std::size_t v = 0; v < dof_of_vertex.size(); ++v)
    if (dof_of_vertex[v] >= 0) out(static_cast<Eigen::Index>(v)) = free(dof_of_vertex[v]);
  return out;
}

ElementMatrices element_matrices(const Point& p0, const Point& p1, const Point& p2, const MetricField& g,
                                 const WeightField& w, int quad_order, bool audit) {
  Mat2 B;
  B.col(0) = p1 - p0;
  B.col(1) = p2 - p0;
  const double area = 0.5 * B.determinant();
  if (!(area > 0.0)) throw MeshError("element with non-positive area");

  // Rows are the constant gradients of the three barycentric basis functions.
  Eigen::Matrix<double, 3, 2> ref;
  ref << -1.0, -1.0, 1.0, 0.0, 0.0, 1.0;
  const Eigen::Matrix<double, 3, 2> grad = ref * B.inverse();

  ElementMatrices e;
  e.K.setZero();
  e.M.setZero();
  e.R.setZero();
  e.r.setZero();
  for (const auto& q : triangle_rule(quad_order)) {
    const Point x = map_to_cell(p0, p1, p2, q);
    const Mat2 G = g(x);
    if (audit) audit_comparability(g, G, x);
    const double sqrt_det = std::sqrt(G.determinant());
    const double rho = w(x);
    if (!std::isfinite(rho)) throw ModelingError("weight '" + w.name + "' is not finite at a quadrature point");
    const Mat2 coeff = G.inverse() * sqrt_det;
    const Eigen::Vector3d phi(1.0 - q.l1 - q.l2, q.l1, q.l2);
    const double wq = q.w * area;
    e.K.noalias() += wq * grad * coeff * grad.transpose();
    e.M.noalias() += (wq * sqrt_det) * phi * phi.transpose();
    e.R.noalias() += (wq * sqrt_det * rho) * phi * phi.transpose();
    e.r.noalias() += (wq * sqrt_det * rho) * phi;
  }
  // Exact symmetry of the element matrices.
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      e.K(j, i) = e.K(i, j);
      e.M(j, i) = e.M(i, j);
      e.R(j, i) = e.R(i, j);
    }
  }
  return e;
}

SparseMatrix restrict_to_free(const SparseMatrix& a, const std::vector<int>& dof_of_vertex, int num_free) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(a.nonZeros()));
  for (int col = 0; col < a.outerSize(); ++col) {
    const int jc = dof_of_vertex[col];
    if (jc < 0) continue;
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      const int ir = dof_of_vertex[it.row()];
      if (ir >= 0) trip.emplace_back(ir, jc, it.value());
    }
  }
  SparseMatrix out(num_free, num_free);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Pencil assemble_with_mask(const Mesh& m, const MetricField& g, const WeightField& w,
                          const std::vector<char>& eliminated, const BoundarySpec& bc, int quad_order) {
  const int nv = m.num_vertices();
  if (static_cast<int>(eliminated.size()) != nv) throw MeshError("assemble: elimination mask size mismatch");

  std::vector<Eigen::Triplet<double>> tk, tm, tr;
  tk.reserve(9 * m.triangles.size());
  tm.reserve(9 * m.triangles.size());
  tr.reserve(9 * m.triangles.size());
  Vector r_full = Vector::Zero(nv);

  Pencil p;
  p.bc = bc;
  p.level = m.level;
  p.quad_order = quad_order;

  const auto rule = triangle_rule(quad_order);
  p.weight_min = std::numeric_limits<double>::infinity();
  p.weight_max = -std::numeric_limits<double>::infinity();
  for (const auto& tri : m.triangles) {
    const Point &p0 = m.vertices[tri[0]], &p1 = m.vertices[tri[1]], &p2 = m.vertices[tri[2]];
    const auto e = element_matrices(p0, p1, p2, g, w, quad_order);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        tk.emplace_back(tri[i], tri[j], e.K(i, j));
        tm.emplace_back(tri[i], tri[j], e.M(i, j));
        tr.emplace_back(tri[i], tri[j], e.R(i, j));
      }
      r_full(tri[i]) += e.r(i);
    }
    // Scalar integrals reuse the same sample points.
    const double area = 0.5 * ((p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x());
    for (const auto& q : rule) {
      const Point x = map_to_cell(p0, p1, p2, q);
      const double sd = std::sqrt(g(x).determinant());
      const double rho = w(x);
      p.volume += q.w * area * sd;
      p.weight_mean += q.w * area * sd * rho;
      p.weight_abs += q.w * area * sd * std::abs(rho);
      p.weight_min = std::min(p.weight_min, rho);
      p.weight_max = std::max(p.weight_max, rho);
    }
  }

  p.K.resize(nv, nv);
  p.Mm.resize(nv, nv);
  p.R.resize(nv, nv);
  p.K.setFromTriplets(tk.begin(), tk.end());
  p.Mm.setFromTriplets(tm.begin(), tm.end());
  p.R.setFromTriplets(tr.begin(), tr.end());

  p.dof_of_vertex.assign(static_cast<std::size_t>(nv), -1);
  for (int v = 0; v < nv; ++v) {
    if (!eliminated[v]) {
      p.dof_of_vertex[v] = static_cast<int>(p.free_dofs.size());
      p.free_dofs.push_back(v);
    }
  }
  const int nf = p.num_free();
  if (nf == 0) throw ModelingError("assemble: every vertex is eliminated");
  p.K_free = restrict_to_free(p.K, p.dof_of_vertex, nf);
  p.M_free = restrict_to_free(p.Mm, p.dof_of_vertex, nf);
  p.R_free = restrict_to_free(p.R, p.dof_of_vertex, nf);
  p.r.resize(nf);
  for (int i = 0; i < nf; ++i) p.r(i) = r_full(p.free_dofs[i]);

  if (nf == nv) {
    const Vector k_one = p.K * Vector::Ones(nv);
    const double scale = p.K.coeffs().cwiseAbs().maxCoeff();
    p.tau = k_one.lpNorm<Eigen::Infinity>() <= 1e-10 * scale ? 1 : 0;
  }

  if (w.nonzero_mean_required && std::abs(p.weight_mean) <= 1e-10 * std::max(p.weight_abs, 1e-300))
    throw ModelingError("weight '" + w.name + "' has zero mean (int rho dmu_g = 0) but a nonzero mean is required");
  return p;
}

Pencil assemble(const Mesh& m, const MetricField& g, const WeightField& w, const BoundarySpec& bc, int quad_order) {
  const auto norm = bc.normalized(m.tags());
  return assemble_with_mask(m, g, w, dirichlet_vertices(m, norm), norm, quad_order);
}

void dump_coordinate(const SparseMatrix& a, std::ostream& os) {
  std::ostringstream line;
  line.precision(17);
  for (int col = 0; col < a.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ';
      line.str("");
      line << it.value();
      os << line.str() << '\n';
    }
  }
}

} // namespace roughweyl
