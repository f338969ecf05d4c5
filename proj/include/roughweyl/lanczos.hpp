#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>

namespace roughweyl {

// Block Lanczos with full reorthogonalization in a B inner product.
//
// The operator A must be self-adjoint with respect to <x, y>_B = x^T B y
// on the working subspace selected by `project`. Extreme eigenvalues at
// both ends of the spectrum are extracted in the same run.
struct LanczosProblem {
  Eigen::Index n = 0;
  Eigen::Index working_dim = 0; // dimension of the range of `project`
  std::function<void(const Eigen::MatrixXd&, Eigen::MatrixXd&)> apply_op;
  std::function<void(const Eigen::MatrixXd&, Eigen::MatrixXd&)> apply_B;
  std::function<void(Eigen::MatrixXd&)> project; // may be empty (identity)
};

struct LanczosOptions {
  int nev_top = 0;    // largest algebraic eigenvalues wanted (positive side)
  int nev_bottom = 0; // smallest algebraic eigenvalues wanted (negative side)
  int block = 2;
  double tol = 1e-10; // residual tolerance relative to the largest |theta|
  double zero_floor = 1e-10;
  Eigen::Index max_dim = 0; // 0 selects a default from the request size
  std::uint64_t seed = 1;
  bool want_vectors = false;
};

struct LanczosResult {
  Eigen::VectorXd top;    // descending, all > 0
  Eigen::VectorXd bottom; // ascending, all < 0
  Eigen::MatrixXd top_vectors;
  Eigen::MatrixXd bottom_vectors;
  Eigen::Index krylov_dim = 0;
  bool exhausted = false; // Krylov space filled the working space
  int checks = 0;
};

// Throws SolverError when the requested pairs do not converge within max_dim.
LanczosResult block_lanczos(const LanczosProblem& problem, const LanczosOptions& opts);

} // namespace roughweyl
