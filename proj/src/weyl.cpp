#include "roughweyl/weyl.hpp"

#include "roughweyl/errors.hpp"
#include "roughweyl/parallel.hpp"
#include "roughweyl/quadrature.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

namespace roughweyl {

int counting(const Spectrum& s, double lam, Sign sign) {
  if (!(lam > 0.0)) throw SolverError("counting: lambda must be > 0");
  const auto& v = s.side(sign);
  if (!s.meta.complete(sign) && (v.empty() || lam < v.back()))
    throw SolverError("counting: lambda = " + std::to_string(lam) + " lies below the computed range");
  // v is descending: count the prefix strictly above lam.
  const auto it = std::partition_point(v.begin(), v.end(), [lam](double x) { return x > lam; });
  return static_cast<int>(it - v.begin());
}

double unit_ball_volume(int n) {
  if (n < 1) throw ModelingError("unit_ball_volume: n must be >= 1");
  const double h = 0.5 * n;
  return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

double weyl_constant(int n, double integral) {
  if (n < 1) throw ModelingError("weyl_constant: n must be >= 1");
  if (integral <= 0.0) return 0.0;
  const double e = 2.0 / n;
  return std::pow(unit_ball_volume(n) / std::pow(2.0 * std::numbers::pi, n), e) * std::pow(integral, e);
}

WeylTarget weyl_target(const Mesh& m, const MetricField& g, const WeightField& w, int quad_order) {
  WeylTarget out;
  out.dimension = 2;
  out.quad_order = quad_order;
  const double half_n = 0.5 * out.dimension;
  const auto rule = triangle_rule(quad_order);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    const Point &p0 = m.vertices[tri[0]], &p1 = m.vertices[tri[1]], &p2 = m.vertices[tri[2]];
    const double area = m.signed_area(t);
    for (const auto& q : rule) {
      const Point x = map_to_cell(p0, p1, p2, q);
      const double dmu = q.w * area * std::sqrt(g(x).determinant());
      const double rho = w(x);
      out.vol += dmu;
      if (rho > 0.0) out.int_plus += dmu * std::pow(rho, half_n);
      else if (rho < 0.0) out.int_minus += dmu * std::pow(-rho, half_n);
      ++out.quad_points;
    }
  }
  out.c_plus = weyl_constant(out.dimension, out.int_plus);
  out.c_minus = weyl_constant(out.dimension, out.int_minus);
  return out;
}

FitResult fit_limit(const std::vector<double>& v, Sign sign, Window window, double target) {
  FitResult f;
  f.sign = sign;
  f.target = target;
  f.available = static_cast<int>(v.size());
  if (v.empty()) {
    f.empty = true;
    return f;
  }
  const int n = f.available;
  f.k_lo = window.lo > 0 ? window.lo : std::max(10, n / 3);
  f.k_hi = window.hi > 0 ? window.hi : (2 * n) / 3;
  if (f.k_lo < 10) throw SolverError("fit_limit: window must start at k >= 10");
  if (f.k_hi > n)
    throw SolverError("fit_limit: window end " + std::to_string(f.k_hi) + " exceeds the " + std::to_string(n) +
                      " available eigenvalues");
  const int samples = f.k_hi - f.k_lo + 1;
  if (samples < 20) throw SolverError("fit_limit: window has " + std::to_string(std::max(samples, 0)) +
                                      " samples, at least 20 are required");

  Eigen::MatrixXd A(samples, 2);
  Eigen::VectorXd y(samples);
  double sum = 0.0;
  for (int k = f.k_lo; k <= f.k_hi; ++k) {
    const double lam = v[static_cast<std::size_t>(k - 1)];
    sum += lam * k; // k^{2/n} with n = 2
    const double Lam = 1.0 / lam;
    A(k - f.k_lo, 0) = Lam;
    A(k - f.k_lo, 1) = std::sqrt(Lam);
    y(k - f.k_lo) = k - 0.5;
  }
  f.estimate = sum / samples;
  const Eigen::Vector2d ab = A.colPivHouseholderQr().solve(y);
  f.slope = ab(0);
  f.sqrt_coeff = ab(1);
  if (target > 0.0) {
    f.rel_dev = f.estimate / target - 1.0;
    f.slope_rel_dev = f.slope / target - 1.0;
  }
  return f;
}

FitResult fit_limit(const Spectrum& s, Sign sign, Window window, double target) {
  return fit_limit(s.side(sign), sign, window, target);
}

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

} // namespace

void write_spectrum_csv(std::ostream& os, const Spectrum& s, const WeylTarget& target) {
  os << "k,lambda_plus,lambda_minus,k_pow_lambda_plus,k_pow_lambda_minus,target_plus,target_minus,"
        "rel_dev_plus,rel_dev_minus\n";
  const std::size_t rows = std::max(s.pos.size(), s.neg.size());
  const double e = 2.0 / target.dimension;
  for (std::size_t i = 0; i < rows; ++i) {
    const int k = static_cast<int>(i + 1);
    std::string lam[2], kp[2], dev[2];
    for (int side = 0; side < 2; ++side) {
      const auto& v = side == 0 ? s.pos : s.neg;
      const double c = side == 0 ? target.c_plus : target.c_minus;
      if (i < v.size()) {
        const double w = v[i] * std::pow(static_cast<double>(k), e);
        lam[side] = num(v[i]);
        kp[side] = num(w);
        if (c > 0.0) dev[side] = num(w / c - 1.0);
      }
    }
    os << k << ',' << lam[0] << ',' << lam[1] << ',' << kp[0] << ',' << kp[1] << ',' << num(target.c_plus) << ','
       << num(target.c_minus) << ',' << dev[0] << ',' << dev[1] << '\n';
  }
}

std::vector<ConvergenceRow> convergence_study(const std::function<Problem(int level)>& make,
                                              const std::vector<int>& levels, const ConvergenceOptions& opts) {
  if (levels.size() < 2) throw ModelingError("convergence_study: at least two levels are required");
  std::vector<ConvergenceRow> rows(levels.size());
  parallel_for(levels.size(), [&](std::size_t i) {
    const Problem pr = make(levels[i]);
    const Pencil p = pr.assemble();
    ConvergenceRow row;
    row.level = levels[i];
    row.dofs = p.num_free();
    row.target = weyl_target(pr.mesh, pr.metric, pr.weight, pr.quad_order);
    SolveOptions so = opts.solve;
    int k = opts.k_each;
    if (k <= 0 && opts.k_fraction > 0.0)
      k = std::min(p.num_free() - 1, std::max(opts.k_min, static_cast<int>(opts.k_fraction * p.num_free())));
    if (k <= 0) so.method = SolverMethod::Dense;
    const Spectrum s = solve_weighted(p, opts.t, k, so);
    for (Sign sg : {Sign::Plus, Sign::Minus}) {
      std::optional<FitResult> f;
      try {
        f = fit_limit(s, sg, opts.window, row.target.c(sg));
      } catch (const SolverError&) {
        // window does not fit this level's spectrum; the row records a gap
      }
      (sg == Sign::Plus ? row.plus : row.minus) = f;
    }
    rows[i] = std::move(row);
  });
  return rows;
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "level,dofs,k_lo_plus,k_hi_plus,estimate_plus,target_plus,rel_dev_plus,slope_plus,slope_rel_dev_plus,"
        "k_lo_minus,k_hi_minus,estimate_minus,target_minus,rel_dev_minus,slope_minus,slope_rel_dev_minus\n";
  for (const auto& r : rows) {
    os << r.level << ',' << r.dofs;
    for (const auto* f : {&r.plus, &r.minus}) {
      const double c = f == &r.plus ? r.target.c_plus : r.target.c_minus;
      if (f->has_value() && !(*f)->empty) {
        const auto& x = **f;
        os << ',' << x.k_lo << ',' << x.k_hi << ',' << num(x.estimate) << ',' << num(c) << ',' << num(x.rel_dev)
           << ',' << num(x.slope) << ',' << num(x.slope_rel_dev);
      } else {
        os << ",,,," << num(c) << ",,,";
      }
    }
    os << '\n';
  }
}

nlohmann::json to_json(const WeylTarget& t) {
  return {{"c_plus", t.c_plus},     {"c_minus", t.c_minus},       {"vol", t.vol},
          {"int_plus", t.int_plus}, {"int_minus", t.int_minus},   {"dimension", t.dimension},
          {"quad_order", t.quad_order}, {"quad_points", t.quad_points}};
}

nlohmann::json to_json(const FitResult& f) {
  nlohmann::json j = {{"sign", f.sign == Sign::Plus ? "plus" : "minus"}, {"available", f.available}};
  if (f.empty) {
    j["empty_side"] = true;
    return j;
  }
  j["empty_side"] = false;
  j["window"] = {f.k_lo, f.k_hi};
  j["estimate"] = f.estimate;
  j["target"] = f.target;
  j["rel_dev"] = f.rel_dev;
  j["slope"] = f.slope;
  j["sqrt_coeff"] = f.sqrt_coeff;
  j["slope_rel_dev"] = f.slope_rel_dev;
  return j;
}

} // namespace roughweyl
