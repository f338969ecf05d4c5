// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Usage: acceptance [criterion numbers...]   (default: all)

#include "roughweyl/config.hpp"
#include "roughweyl/errors.hpp"
#include "roughweyl/runner.hpp"
#include "roughweyl/specs.hpp"
#include "roughweyl/spectral.hpp"
#include "roughweyl/varprin.hpp"
#include "roughweyl/weyl.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace roughweyl;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Pencil square_pencil(int n, const WeightField& w, BoundarySpec bc, DiagonalPattern pat = DiagonalPattern::Uniform) {
  return assemble(generate_unit_square(n, pat), euclidean_metric(), w, bc);
}

double sparse_diff(const SparseMatrix& a, const SparseMatrix& b) {
  const SparseMatrix d = a - b;
  double m = 0.0;
  for (int c = 0; c < d.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(d, c); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

// 1. Laplace eigenvalues of the Dirichlet square at h = 1/128.
Outcome laplace_oracle() {
  const Pencil p = square_pencil(128, constant_weight(1.0), BoundarySpec::dirichlet());
  const auto t0 = std::chrono::steady_clock::now();
  const LaplaceSpectrum L = solve_laplace(p, 5);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double oracle[] = {2, 5, 5, 8, 10};
  double worst = 0.0;
  std::string vals;
  for (int i = 0; i < 5; ++i) {
    worst = std::max(worst, std::abs(L.values[i] / (kPi2 * oracle[i]) - 1.0));
    vals += fmt("%s%.4f", i ? "," : "", L.values[i] / kPi2);
  }
  return {worst < 0.005 && secs < 60.0,
          fmt("Lambda/pi^2 = {%s}, worst rel err %.2e (tol 5e-3), solve %.1f s (limit 60 s)", vals.c_str(), worst, secs)};
}

// 2. Classical Weyl slope from the first 500 eigenvalues at h = 1/128.
Outcome classical_weyl() {
  const Mesh m = generate_unit_square(128);
  const Pencil p = assemble(m, euclidean_metric(), constant_weight(1.0), BoundarySpec::dirichlet());
  const auto t0 = std::chrono::steady_clock::now();
  const Spectrum s = solve_weighted(p, 0.0, 500);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const WeylTarget target = weyl_target(m, euclidean_metric(), constant_weight(1.0));
  const FitResult f = fit_limit(s, Sign::Plus, Window{}, target.c_plus);
  return {std::abs(f.slope_rel_dev) < 0.10 && secs < 300.0,
          fmt("a = %.6f vs 1/(4 pi) = %.6f, rel dev %+.4f (tol 0.10), window [%d, %d], raw tail dev %+.4f, "
              "%s solve %.1f s (limit 300 s)",
              f.slope, target.c_plus, f.slope_rel_dev, f.k_lo, f.k_hi, f.rel_dev, s.meta.method.c_str(), secs)};
}

// 3. Indefinite halves weight on a mirror-symmetric mesh.
Outcome indefinite_weight() {
  const int n = 192;
  const Mesh m = generate_unit_square(n, DiagonalPattern::Mirrored);
  const WeightField w = halves_weight(1.0, -1.0);
  const Pencil p = assemble(m, euclidean_metric(), w, BoundarySpec::dirichlet());
  const auto t0 = std::chrono::steady_clock::now();
  const Spectrum s = solve_weighted(p, 0.0, 300);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const WeylTarget target = weyl_target(m, euclidean_metric(), w);
  const double c = 1.0 / (8 * kPi);
  const FitResult fp = fit_limit(s, Sign::Plus, Window{100, 300}, target.c_plus);
  const FitResult fn = fit_limit(s, Sign::Minus, Window{100, 300}, target.c_minus);
  double sym = 0.0;
  for (int i = 0; i < 300; ++i) sym = std::max(sym, std::abs(s.pos[i] - s.neg[i]));
  const double dp = fp.estimate / c - 1.0, dn = fn.estimate / c - 1.0;
  const bool pass = std::abs(dp) < 0.10 && std::abs(dn) < 0.10 && sym <= 1e-9;
  return {pass, fmt("h = 1/%d, tail mean of lambda_k k over [100, 300]: plus %.6f (%+.4f), minus %.6f (%+.4f) vs "
                    "1/(8 pi) = %.6f (tol 0.10); max |lambda+ - lambda-| = %.1e (tol 1e-9); %.1f s",
                    n, fp.estimate, dp, fn.estimate, dn, c, sym, secs)};
}

// 4. Lipschitz-graph cone metric on the disk.
Outcome rough_metric() {
  const Mesh m = generate_disk(64);
  const MetricField g = graph_cone_metric();
  const Pencil p = assemble(m, g, constant_weight(1.0), BoundarySpec::dirichlet());
  const auto t0 = std::chrono::steady_clock::now();
  const Spectrum s = solve_weighted(p, 0.0, 400);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const WeylTarget target = weyl_target(m, g, constant_weight(1.0));
  const FitResult f = fit_limit(s, Sign::Plus, Window{}, target.c_plus);
  const double exact = std::sqrt(2.0) / 4.0;
  const double dev_exact = f.slope / exact - 1.0;
  return {std::abs(f.slope_rel_dev) < 0.10,
          fmt("64 rings, %d DOFs; fitted limit %.6f vs quadrature target %.6f: rel dev %+.4f (tol 0.10); "
              "vs sqrt(2)/4 = %.6f: %+.4f; raw tail dev %+.4f; %.1f s",
              p.num_free(), f.slope, target.c_plus, f.slope_rel_dev, exact, dev_exact, f.rel_dev, secs)};
}

// 5. Dirichlet-Neumann bracketing on 2- and 4-cell partitions.
Outcome bracketing() {
  const Mesh m = generate_unit_square(24);
  const WeightField w = parse_weight_spec("x - 0.4 + 0.3*sin(6*y)");
  double worst = 1e300;
  bool pass = true;
  std::string parts;
  for (auto [nx, ny] : {std::pair{2, 1}, std::pair{2, 2}}) {
    for (const BoundarySpec& bc : {BoundarySpec::dirichlet(), BoundarySpec::neumann()}) {
      const auto rep = check_bracketing(m, grid_partition(m, nx, ny), euclidean_metric(), w, bc, 1.0, 50);
      const bool full = rep.plus.size() == 50 && rep.minus.size() == 50;
      pass = pass && rep.passed && full && rep.worst_margin >= -1e-9;
      worst = std::min(worst, rep.worst_margin);
      parts += fmt("%s%dx%d %s %.2e", parts.empty() ? "" : ", ", nx, ny, bc.describe().c_str(), rep.worst_margin);
    }
  }
  return {pass, fmt("t = 1, k <= 50, both signs; worst margin %.2e (tol -1e-9) [%s]", worst, parts.c_str())};
}

// 6. Sandwich bounds for Dirichlet and Neumann runs.
Outcome sandwich() {
  auto problem = [](const char* weight, BoundarySpec bc) {
    Problem pr;
    pr.mesh = generate_unit_square(24);
    pr.metric = euclidean_metric();
    pr.weight = parse_weight_spec(weight);
    pr.bc = bc;
    return pr;
  };
  const std::vector<double> ts{0.5, 0.1, 0.02};
  const auto dir = check_sandwich(problem("halves:2,-1", BoundarySpec::dirichlet()), ts, 100);
  const auto neu1 = check_sandwich(problem("const:1", BoundarySpec::neumann()), ts, 100);
  const auto neu2 = check_sandwich(problem("halves:2,-1", BoundarySpec::neumann()), ts, 100);
  const bool pass = dir.passed && neu1.passed && neu2.passed && dir.tau == 0 && neu1.tau == 1 && neu2.tau == 1 &&
                    neu1.shift_required;
  double unshifted = 1e300;
  for (const auto& c : neu1.cases) unshifted = std::min(unshifted, c.unshifted_margin);
  return {pass, fmt("k <= 100, t in {0.5, 0.1, 0.02}; worst margins: Dirichlet %.2e, Neumann rho=1 %.2e, "
                    "Neumann halves %.2e (tol -1e-9); Neumann tau = %d, unshifted margin %.2e so the shift is %s",
                    dir.worst_margin, neu1.worst_margin, neu2.worst_margin, neu1.tau, unshifted,
                    neu1.shift_required ? "required" : "NOT required")};
}

// 7. Pullback by a piecewise-linear shear equals assembly on the image mesh.
Outcome pullback() {
  const double s = 0.35;
  const Mesh m = generate_unit_square(32);
  const Mesh image = map_vertices(m, [&](const Point& x) { return shear_map(x, s); });
  const WeightField w = parse_weight_spec("x - 0.5 + 0.2*y");
  WeightField pulled;
  pulled.eval = [&](const Point& x) { return w(shear_map(x, s)); };
  pulled.name = "rho o phi";
  const Pencil a = assemble(m, parse_metric_spec("pullback:shear=0.35"), pulled, BoundarySpec::dirichlet());
  const Pencil b = assemble(image, euclidean_metric(), w, BoundarySpec::dirichlet());
  const double dk = sparse_diff(a.K, b.K), dm = sparse_diff(a.Mm, b.Mm), dr = sparse_diff(a.R, b.R);
  SolveOptions o;
  o.method = SolverMethod::Dense;
  const Spectrum sa = solve_weighted(a, 0.0, 100, o), sb = solve_weighted(b, 0.0, 100, o);
  double ds = 0.0;
  bool same_shape = sa.pos.size() == sb.pos.size() && sa.neg.size() == sb.neg.size();
  if (same_shape) {
    for (std::size_t i = 0; i < sa.pos.size(); ++i) ds = std::max(ds, std::abs(sa.pos[i] - sb.pos[i]) / sb.pos[i]);
    for (std::size_t i = 0; i < sa.neg.size(); ++i) ds = std::max(ds, std::abs(sa.neg[i] - sb.neg[i]) / sb.neg[i]);
  }
  const double dmax = std::max({dk, dm, dr});
  return {same_shape && dmax <= 1e-10 && ds <= 1e-9,
          fmt("shear s = %.2f; max entry diff K %.1e, Mm %.1e, R %.1e (tol 1e-10); spectra rel diff %.1e over %zu+%zu "
              "eigenvalues (tol 1e-9)",
              s, dk, dm, dr, ds, sa.pos.size(), sa.neg.size())};
}

// 8. Variational principles, 100 seeded trials per check.
Outcome variational() {
  int checks = 0, violations = 0;
  double worst = 1e300, gap = 0.0;
  bool pass = true;
  for (const char* weight : {"const:1", "checkerboard:n=2,a=1,b=-2"}) {
    const Pencil p = square_pencil(16, parse_weight_spec(weight), BoundarySpec::dirichlet());
    SolveOptions so;
    so.method = SolverMethod::Dense;
    so.want_vectors = true;
    const Spectrum s = solve_weighted(p, 0.0, 10, so);
    PrincipleOptions po;
    po.trials = 100;
    for (Sign sg : {Sign::Plus, Sign::Minus}) {
      if (s.side(sg).empty()) continue;
      for (int k : {1, 2, 3, 5, 10}) {
        for (const auto& r : {check_courant(s, p, k, sg, po), check_poincare_minmax(s, p, k, sg, po),
                              check_rayleigh(s, p, k, sg, po)}) {
          ++checks;
          violations += r.violations;
          worst = std::min(worst, r.worst_margin);
          gap = std::max(gap, r.attainment_gap);
          pass = pass && r.passed && r.trials == 100 && r.attainment_gap <= 1e-9;
        }
      }
    }
  }
  return {pass && violations == 0,
          fmt("%d checks x 100 trials (Courant, Poincare, Rayleigh; k in {1,2,3,5,10}); %d violations, worst margin "
              "%.2e (tol -1e-9), max attainment gap %.1e (tol 1e-9)",
              checks, violations, worst, gap)};
}

// 9. Neumann problem on Z(rho) for rho = 1.
Outcome poincare_zrho() {
  const Pencil p = square_pencil(128, constant_weight(1.0), BoundarySpec::neumann());
  const Spectrum s = solve_weighted(p, 0.0, 3);
  const double rel = s.pos[0] * kPi2 - 1.0;
  return {p.tau == 1 && s.meta.constrained && std::abs(rel) < 0.01,
          fmt("tau = %d, lambda_1+ on Z(rho) = %.8f vs 1/pi^2 = %.8f, rel dev %+.2e (tol 1e-2)", p.tau, s.pos[0],
              1.0 / kPi2, rel)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 10. Identical configs and seeds reproduce every artifact byte for byte.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "roughweyl_acceptance_determinism";
  fs::remove_all(root);
  const fs::path home = fs::current_path();
  struct Run {
    const char* task;
    const char* config;
    std::vector<std::string> artifacts;
  };
  const Run runs[] = {
      {"weyl", "[domain]\nn = 8\nlevel = 3\n[weight]\nspec = checkerboard:n=2,a=1,b=-1\n"
               "[solver]\nmethod = sparse\nk_each = 80\nseed = 11\n",
       {"counting.svg", "spectrum.csv", "summary.json"}},
      {"varprin", "[domain]\nn = 10\nlevel = 0\n[weight]\nspec = x - 0.3\n[solver]\ntrials = 20\nseed = 5\n",
       {"summary.json", "varprin.json"}},
      {"bracket", "[domain]\nn = 12\nlevel = 0\n[weight]\nspec = halves:1,-1\n[solver]\npartition = 2x2\n",
       {"bracket.json", "summary.json"}},
  };
  int files = 0, mismatched = 0;
  std::string bad;
  for (const auto& [task, text, artifacts] : runs) {
    for (const char* rep : {"a", "b"}) {
      const fs::path dir = root / task / rep;
      fs::create_directories(dir);
      std::ofstream(dir / "run.ini") << text;
      fs::current_path(dir);
      std::ostringstream log, err;
      const int rc = run_experiment(task, "run.ini", {}, log, err);
      fs::current_path(home);
      if (rc > 1) return {false, fmt("%s run failed with exit %d: %s", task, rc, err.str().c_str())};
    }
    for (const char* rep : {"a", "b"}) {
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(root / task / rep / "out")) found.push_back(e.path().filename().string());
      std::sort(found.begin(), found.end());
      if (found != artifacts) {
        ++mismatched;
        bad += " " + std::string(task) + "/" + rep + ":unexpected file set";
      }
    }
    for (const std::string& name : artifacts) {
      ++files;
      const fs::path a = root / task / "a" / "out" / name;
      const fs::path b = root / task / "b" / "out" / name;
      if (!fs::exists(a) || !fs::exists(b) || slurp(a) != slurp(b)) {
        ++mismatched;
        bad += " " + std::string(task) + "/" + name;
      }
    }
  }
  fs::remove_all(root);
  return {mismatched == 0,
          fmt("%d artifacts from weyl, varprin and bracket reruns compared byte for byte, %d differ%s", files,
              mismatched, bad.c_str())};
}

} // namespace

int main(int argc, char** argv) {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"analytic Laplace oracle", laplace_oracle},
      {"classical Weyl slope", classical_weyl},
      {"indefinite weight", indefinite_weight},
      {"rough metric (graph cone)", rough_metric},
      {"Dirichlet-Neumann bracketing", bracketing},
      {"sandwich bounds", sandwich},
      {"pullback invariance", pullback},
      {"variational principles", variational},
      {"Z(rho) and Poincare", poincare_zrho},
      {"determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (int i = 0; i < 10; ++i) {
    if (!only.empty() && !only.contains(i + 1)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s: %s [%s] (%.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
