#pragma once

#include "roughweyl/assembly.hpp"

#include <Eigen/Cholesky>

namespace roughweyl::detail {

// Dense energy coordinates for a weighted pencil.
//
// With B = K + t Mm (plus s r r^T when constrained) factored as L L^T, the
// map v = L^{-T} H [0; y] (or v = L^{-T} y without constraint) identifies
// the working space with R^d so that v^T B v = y^T y and v^T N v = y^T S y.
// H is the Householder reflector sending L^{-1} r to a multiple of e_1.
struct DenseWorkingForm {
  Matrix S;
  Eigen::LLT<Matrix> llt;
  bool constrained = false;
  Vector householder; // reflector direction, empty when unconstrained
  int nf = 0;

  int dim() const { return static_cast<int>(S.rows()); }

  Matrix to_dofs(const Matrix& Y) const;
  Matrix to_coords(const Matrix& V) const;
};

DenseWorkingForm dense_working_form(const Pencil& p, const SparseMatrix& numerator, double t,
                                    const Vector* constraint);

// Energy matrix K_free + t M_free as a sparse matrix.
SparseMatrix energy_matrix(const Pencil& p, double t);

} // namespace roughweyl::detail
