#pragma once

#include "roughweyl/assembly.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace roughweyl {

enum class Sign { Plus, Minus };

enum class SolverMethod { Auto, Dense, Sparse };

struct SolveOptions {
  SolverMethod method = SolverMethod::Auto;
  bool want_vectors = false;
  std::uint64_t seed = 1;
  int dense_limit = 3000; // Auto picks the dense path up to this working dimension
  int block = 4;          // Lanczos block size
  double tol = 1e-10;
  Eigen::Index max_krylov = 0;
};

struct SpectrumMeta {
  double t = 0.0;
  std::string bc;
  int level = 0;
  bool constrained = false; // solved on the rho-mean-zero subspace
  std::string method;
  int working_dim = 0;
  // Every nonzero eigenvalue of that sign is present in the list.
  bool complete_pos = false;
  bool complete_neg = false;

  bool complete(Sign s) const { return s == Sign::Plus ? complete_pos : complete_neg; }
};

// Nonzero eigenvalues of R v = lambda (K + t Mm) v split by sign.
// pos is descending; neg holds the magnitudes of the negative eigenvalues,
// also descending. Eigenvectors (free-DOF coefficients) are normalized in
// the K + t Mm inner product.
struct Spectrum {
  std::vector<double> pos;
  std::vector<double> neg;
  Matrix vecs_pos;
  Matrix vecs_neg;
  SpectrumMeta meta;

  const std::vector<double>& side(Sign s) const { return s == Sign::Plus ? pos : neg; }
  const Matrix& vectors(Sign s) const { return s == Sign::Plus ? vecs_pos : vecs_neg; }
  bool has_vectors() const { return vecs_pos.cols() == static_cast<Eigen::Index>(pos.size()) &&
                                    vecs_neg.cols() == static_cast<Eigen::Index>(neg.size()) &&
                                    (vecs_pos.cols() + vecs_neg.cols()) > 0; }

  // Distinct eigenvalues with multiplicities; values within
  // 1e-8 * max(1, |lambda|) are merged.
  std::vector<std::pair<double, int>> grouped(Sign s) const;
};

// Rank-one description of the coercivity subspace {v : r^T v = 0}.
struct ConstraintProjection {
  bool active = false;
  Vector r;
  double mean = 0.0; // r^T 1 = int rho dmu_g over the free space
  int working_dim = 0;

  // Euclidean orthogonal projection onto r-perp (identity when inactive).
  Vector project(const Vector& v) const;
};

// Throws ModelingError when tau = 1 and int rho dmu_g vanishes.
ConstraintProjection project_constraint(const Pencil& p);

// Weighted problem rho[u,v] = lambda E_t[u,v]. With t = 0 and tau = 1 the
// problem is posed on Z(rho). k_each eigenvalues per sign; k_each <= 0
// requests the full spectrum (dense path only).
Spectrum solve_weighted(const Pencil& p, double t, int k_each, const SolveOptions& opts = {});

// Same machinery with an arbitrary symmetric numerator in place of R_free.
// The Z(rho) constraint still follows `p`.
Spectrum solve_pencil(const Pencil& p, const SparseMatrix& numerator, double t, int k_each,
                      const SolveOptions& opts = {});

struct LaplaceSpectrum {
  std::vector<double> values; // ascending
  Matrix vectors;             // Mm-normalized columns (free DOFs) when requested
};

// Smallest eigenvalues of K v = Lambda Mm v on the free space. Under pure
// Neumann conditions the zero mode comes first with the constant vector.
LaplaceSpectrum solve_laplace(const Pencil& p, int count, const SolveOptions& opts = {});

} // namespace roughweyl
