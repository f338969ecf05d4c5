#pragma once

#include "roughweyl/problem.hpp"
#include "roughweyl/spectral.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace roughweyl {

// Outcome of one variational-principle check at a fixed index k.
//
// margin is signed so that a negative value is a violation: for an upper
// bound (Poincare, Rayleigh) it is lambda_k - value, for Courant's lower
// bound it is value - lambda_k. worst_margin is the minimum over trials.
struct PrincipleReport {
  std::string name;
  Sign sign = Sign::Plus;
  int k = 0;
  int trials = 0;
  int resampled = 0; // degenerate samples that were redrawn
  int violations = 0;
  double worst_margin = 0.0;
  double attained = 0.0;       // value of the optimal subspace / vector
  double attainment_gap = 0.0; // |attained - lambda_k|
  double tol = 1e-9;
  bool passed = false;
};

struct PrincipleOptions {
  int trials = 100;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  // Relative size of the Gaussian perturbations applied to the optimal
  // subspace on every other trial, so samples also land near the bound.
  double perturbation = 1e-2;
};

// max-min: for random k-dimensional subspaces V of the working space,
// min over V of sigma * v^T R v / v^T (K + t Mm) v <= lambda_k^sigma.
// `s` must carry eigenvectors of that sign.
PrincipleReport check_poincare_minmax(const Spectrum& s, const Pencil& p, int k, Sign sign,
                                      const PrincipleOptions& opts = {});

// Random vectors made (K + t Mm)-orthogonal to the first k-1 eigenvectors
// satisfy sigma * ratio <= lambda_k^sigma.
PrincipleReport check_rayleigh(const Spectrum& s, const Pencil& p, int k, Sign sign, const PrincipleOptions& opts = {});

// min-max, testable direction: over random subspaces of codimension k-1
// the maximum of sigma * ratio is >= lambda_k^sigma. Uses the dense
// working form, so the working dimension must be moderate.
PrincipleReport check_courant(const Spectrum& s, const Pencil& p, int k, Sign sign, const PrincipleOptions& opts = {});

struct BracketRow {
  int k = 0;
  double nu = 0.0;     // merged subdomain Dirichlet sequence
  double lambda = 0.0; // global
  double eta = 0.0;    // merged subdomain Neumann sequence
};

struct BracketReport {
  double t = 0.0;
  int k_max = 0;
  int cells = 0;
  std::vector<BracketRow> plus;
  std::vector<BracketRow> minus;
  std::vector<std::string> violations;
  double worst_margin = 0.0; // min over k and signs of lambda - nu and eta - lambda
  double tol = 1e-9;
  bool passed = false;
};

// Dirichlet-Neumann bracketing over a partition of the mesh triangles.
// Subdomain Dirichlet problems eliminate every vertex shared with another
// cell; subdomain Neumann problems leave the interface free. Vertices
// eliminated by the global boundary condition stay eliminated in both.
BracketReport check_bracketing(const Mesh& m, const std::vector<std::vector<int>>& partition, const MetricField& g,
                               const WeightField& w, const BoundarySpec& bc, double t, int k_max,
                               const SolveOptions& opts = {}, int quad_order = 2);

// Cells of a rectangular partition of the triangles by centroid:
// nx columns and ny rows over the bounding box.
std::vector<std::vector<int>> grid_partition(const Mesh& m, int nx, int ny);

struct SandwichRow {
  int k = 0;
  double lower = 0.0;  // lambda_{k+tau}(W, t)
  double value = 0.0;  // lambda_k(W) on Z(rho)
  double upper = 0.0;  // lambda_k(W, C t) / (1 - t)
};

struct SandwichCase {
  double t = 0.0;
  std::vector<SandwichRow> plus;
  std::vector<SandwichRow> minus;
  double worst_margin = 0.0;
  // Only meaningful when tau = 1: margin of the comparison without the
  // index shift. Negative means the shift is needed.
  double unshifted_margin = 0.0;
};

struct SandwichReport {
  int tau = 0;
  double poincare = 0.0; // C
  int k_max = 0;
  std::vector<SandwichCase> cases;
  bool shift_required = false; // some unshifted comparison fails (tau = 1)
  std::vector<std::string> violations;
  double worst_margin = 0.0;
  double tol = 1e-9;
  bool passed = false;
};

// lambda_{k+tau}(W,t) <= lambda_k(W) <= (1-t)^{-1} lambda_k(W, C t) with
// C = poincare_constant(p), for every t in t_list (each in (0,1)) and k <= k_max.
SandwichReport check_sandwich(const Problem& problem, const std::vector<double>& t_list, int k_max,
                              const SolveOptions& opts = {});

nlohmann::json to_json(const PrincipleReport& r);
nlohmann::json to_json(const BracketReport& r);
nlohmann::json to_json(const SandwichReport& r);

} // namespace roughweyl
