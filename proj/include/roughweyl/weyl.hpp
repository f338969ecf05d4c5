#pragma once

#include "roughweyl/problem.hpp"
#include "roughweyl/spectral.hpp"

#include <json.hpp>

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace roughweyl {

// #{lambda_j^sign > lam} with multiplicities. Throws SolverError when lam
// lies below the computed range of an incomplete side.
int counting(const Spectrum& s, double lam, Sign sign);

// Leading Weyl constant (omega_n / (2 pi)^n)^{2/n} * I^{2/n} where
// I = int |rho|^{n/2} dmu_g over one sign region. omega_n is the volume
// of the unit ball in R^n.
double weyl_constant(int n, double integral);
double unit_ball_volume(int n);

struct WeylTarget {
  double c_plus = 0.0;
  double c_minus = 0.0;
  double vol = 0.0;          // Vol(M, g)
  double int_plus = 0.0;     // int_{rho > 0} |rho|^{n/2} dmu_g
  double int_minus = 0.0;    // int_{rho < 0} |rho|^{n/2} dmu_g
  int dimension = 2;
  int quad_order = 2;
  long quad_points = 0;

  double c(Sign s) const { return s == Sign::Plus ? c_plus : c_minus; }
};

// Sign regions are realized at the quadrature points.
WeylTarget weyl_target(const Mesh& m, const MetricField& g, const WeightField& w, int quad_order = 2);

struct FitResult {
  Sign sign = Sign::Plus;
  bool empty = false;   // no eigenvalue of this sign
  int available = 0;    // eigenvalues present on that side
  int k_lo = 0;
  int k_hi = 0;
  double estimate = 0.0; // mean of lambda_k * k over the window
  double target = 0.0;
  double rel_dev = 0.0;  // estimate / target - 1 (0 when the target vanishes)
  // Least squares k - 1/2 ~ a Lambda_k + b sqrt(Lambda_k), Lambda = 1/lambda.
  double slope = 0.0;
  double sqrt_coeff = 0.0;
  double slope_rel_dev = 0.0;
};

struct Window {
  int lo = 0; // 0 selects max(10, N/3)
  int hi = 0; // 0 selects 2N/3
};

// Throws SolverError when the window has fewer than 20 samples, starts
// below k = 10, or reaches past the available eigenvalues.
FitResult fit_limit(const Spectrum& s, Sign sign, Window window, double target);
FitResult fit_limit(const std::vector<double>& descending, Sign sign, Window window, double target);

// Rows of the spectrum CSV: k, lambda_plus, lambda_minus, k_pow_lambda_plus,
// k_pow_lambda_minus, target_plus, target_minus, rel_dev_plus, rel_dev_minus.
void write_spectrum_csv(std::ostream& os, const Spectrum& s, const WeylTarget& target);

struct ConvergenceRow {
  int level = 0;
  int dofs = 0;
  WeylTarget target;
  std::optional<FitResult> plus;
  std::optional<FitResult> minus;
};

struct ConvergenceOptions {
  double t = 0.0;
  // Eigenvalues per sign at each level. When k_each is 0, k_fraction > 0
  // selects max(k_min, k_fraction * working_dim); with both 0 the dense
  // path returns every eigenvalue.
  int k_each = 0;
  double k_fraction = 0.0;
  int k_min = 64;
  Window window;
  SolveOptions solve;
};

// One fit per level; levels run on up to ROUGHWEYL_THREADS workers and the
// rows come back in the order of `levels`.
std::vector<ConvergenceRow> convergence_study(const std::function<Problem(int level)>& make,
                                              const std::vector<int>& levels, const ConvergenceOptions& opts);

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);

nlohmann::json to_json(const WeylTarget& t);
nlohmann::json to_json(const FitResult& f);

} // namespace roughweyl
