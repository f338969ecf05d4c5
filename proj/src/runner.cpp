#include "roughweyl/runner.hpp"

#include "roughweyl/errors.hpp"
#include "roughweyl/specs.hpp"
#include "roughweyl/svg.hpp"
#include "roughweyl/varprin.hpp"
#include "roughweyl/version.hpp"
#include "roughweyl/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace roughweyl {

namespace fs = std::filesystem;
using nlohmann::json;

Mesh build_mesh(const ExperimentConfig& cfg, int level) {
  if (level < 0) throw ConfigError("[domain] level: must be >= 0");
  if (cfg.shape == "disk") {
    const long rings = static_cast<long>(cfg.n) << level;
    if (rings > 4096) throw ConfigError("[domain] level: disk with " + std::to_string(rings) + " rings is too large");
    Mesh m = generate_disk(static_cast<int>(rings));
    m.level = level;
    return m;
  }
  const auto pattern = cfg.pattern == "mirrored" ? DiagonalPattern::Mirrored : DiagonalPattern::Uniform;
  if (pattern == DiagonalPattern::Mirrored && cfg.n % 2 != 0)
    throw ConfigError("[domain] n: the mirrored pattern needs an even n");
  if ((static_cast<long>(cfg.n) << level) > 4096) throw ConfigError("[domain] level: mesh is too large");
  return refine_uniform(generate_unit_square(cfg.n, pattern), level);
}

Problem build_problem(const ExperimentConfig& cfg, int level) {
  Problem pr;
  pr.mesh = build_mesh(cfg, level);
  pr.metric = parse_metric_spec(cfg.metric);
  pr.weight = parse_weight_spec(cfg.weight);
  pr.bc = parse_boundary_spec(cfg.boundary);
  pr.quad_order = cfg.quad_order;
  return pr;
}

namespace {

SolveOptions solve_options(const ExperimentConfig& cfg) {
  SolveOptions o;
  o.method = cfg.method == "dense" ? SolverMethod::Dense
             : cfg.method == "sparse" ? SolverMethod::Sparse
                                      : SolverMethod::Auto;
  o.seed = cfg.seed;
  o.dense_limit = cfg.dense_limit;
  o.block = cfg.block;
  return o;
}

// Eigenvalues per sign when k_each is left on auto. The Weyl fit keeps about
// 1/32 of the working dimension, where P1 still resolves the eigenfunctions.
int auto_k(const ExperimentConfig& cfg, int working) {
  if (cfg.k_each > 0) return std::min(cfg.k_each, working);
  const int base = cfg.task == "weyl" || cfg.task == "converge" ? 64 : 200;
  return std::min(working, std::max(base, working / 32));
}

json check(const std::string& name, bool pass, json detail = json::object()) {
  return {{"name", name}, {"pass", pass}, {"detail", std::move(detail)}};
}

json mesh_info(const ExperimentConfig& cfg, const Mesh& m) {
  json j = {{"vertices", m.num_vertices()},
            {"triangles", m.num_triangles()},
            {"boundary_edges", m.boundary_edges.size()},
            {"level", m.level}};
  if (cfg.shape == "square") j["h"] = 1.0 / static_cast<double>(static_cast<long>(cfg.n) << m.level);
  else j["rings"] = static_cast<long>(cfg.n) << m.level;
  return j;
}

json pencil_info(const Pencil& p) {
  return {{"free_dofs", p.num_free()},  {"tau", p.tau},
          {"volume", p.volume},         {"weight_mean", p.weight_mean},
          {"weight_abs", p.weight_abs}, {"weight_min", p.weight_min},
          {"weight_max", p.weight_max}, {"bc", p.bc.describe()}};
}

json spectrum_info(const Spectrum& s) {
  auto head = [](const std::vector<double>& v) {
    return std::vector<double>(v.begin(), v.begin() + static_cast<long>(std::min<std::size_t>(v.size(), 10)));
  };
  return {{"method", s.meta.method},
          {"t", s.meta.t},
          {"constrained", s.meta.constrained},
          {"working_dim", s.meta.working_dim},
          {"count_plus", s.pos.size()},
          {"count_minus", s.neg.size()},
          {"complete_plus", s.meta.complete_pos},
          {"complete_minus", s.meta.complete_neg},
          {"first_plus", head(s.pos)},
          {"first_minus", head(s.neg)}};
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  os << j.dump(2) << '\n';
}

template <class F>
void write_text(const fs::path& path, F&& body) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  body(os);
}

// Structural checks on a computed spectrum.
void spectrum_checks(const Spectrum& s, const Pencil& p, json& checks) {
  bool ordered = true;
  for (const auto* v : {&s.pos, &s.neg}) {
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!((*v)[i] > 0.0) || !std::isfinite((*v)[i])) ordered = false;
      if (i > 0 && (*v)[i] > (*v)[i - 1]) ordered = false;
    }
  }
  checks.push_back(check("ordering", ordered));
  bool sign_ok = true;
  if (p.weight_min >= 0.0 && !s.neg.empty()) sign_ok = false;
  if (p.weight_max <= 0.0 && !s.pos.empty()) sign_ok = false;
  checks.push_back(check("sign_split", sign_ok, {{"weight_min", p.weight_min}, {"weight_max", p.weight_max}}));

  if (!s.has_vectors()) return;
  const SparseMatrix B = s.meta.t == 0.0 ? p.K_free : SparseMatrix(p.K_free + s.meta.t * p.M_free);
  Matrix V(p.num_free(), s.vecs_pos.cols() + s.vecs_neg.cols());
  V << s.vecs_pos, s.vecs_neg;
  Vector lam(V.cols());
  for (std::size_t i = 0; i < s.pos.size(); ++i) lam(static_cast<long>(i)) = s.pos[i];
  for (std::size_t i = 0; i < s.neg.size(); ++i) lam(static_cast<long>(s.pos.size() + i)) = -s.neg[i];
  const Matrix G = V.transpose() * (B * V);
  const Matrix Rv = V.transpose() * (p.R_free * V);
  const double e_err = (G - Matrix::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
  const double r_err = (Rv - Matrix(lam.asDiagonal())).cwiseAbs().maxCoeff();
  checks.push_back(check("energy_orthonormality", e_err <= 1e-8, {{"max_error", e_err}, {"tol", 1e-8}}));
  checks.push_back(check("r_orthogonality", r_err <= 1e-8, {{"max_error", r_err}, {"tol", 1e-8}}));
}

bool all_pass(const json& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const json& c) { return c.at("pass").get<bool>(); });
}

} // namespace

RunResult run(const ExperimentConfig& cfg_in, std::ostream& log) {
  ExperimentConfig cfg = cfg_in;
  cfg.resolve();
  const fs::path out = cfg.out_dir;
  fs::create_directories(out);

  json summary = {{"version", kVersion}, {"task", cfg.task}, {"config", cfg.to_json()}};
  json checks = json::array();
  const SolveOptions so = solve_options(cfg);

  if (cfg.task == "converge") {
    log << "converge: levels";
    for (int l : cfg.levels) log << ' ' << l;
    log << '\n';
    ConvergenceOptions co;
    co.t = cfg.t;
    co.k_each = cfg.k_each;
    co.k_fraction = cfg.k_each > 0 ? 0.0 : 1.0 / 32.0;
    co.k_min = 64;
    co.window = cfg.window;
    co.solve = so;
    const auto rows = convergence_study([&](int level) { return build_problem(cfg, level); }, cfg.levels, co);
    write_text(out / "convergence.csv", [&](std::ostream& os) { write_convergence_csv(os, rows); });
    json table = json::array();
    bool fits_ok = true;
    for (const auto& r : rows) {
      json row = {{"level", r.level}, {"dofs", r.dofs}, {"target", to_json(r.target)}};
      for (Sign sg : {Sign::Plus, Sign::Minus}) {
        const auto& f = sg == Sign::Plus ? r.plus : r.minus;
        const char* key = sg == Sign::Plus ? "plus" : "minus";
        if (f) row[key] = to_json(*f);
        else row[key] = nullptr;
        if (r.target.c(sg) > 0.0 && (!f || f->empty)) fits_ok = false;
      }
      table.push_back(row);
    }
    summary["levels"] = table;
    checks.push_back(check("fits_available", fits_ok));
  } else {
    const Problem pr = build_problem(cfg, cfg.level);
    log << cfg.task << ": " << pr.mesh.num_vertices() << " vertices, " << pr.mesh.num_triangles() << " triangles\n";
    summary["mesh"] = mesh_info(cfg, pr.mesh);

    if (cfg.task == "solve" || cfg.task == "weyl") {
      const Pencil p = pr.assemble();
      summary["pencil"] = pencil_info(p);
      const int working = p.num_free() - ((cfg.t == 0.0 && p.tau == 1) ? 1 : 0);
      const int k = auto_k(cfg, working);
      SolveOptions o = so;
      o.want_vectors = cfg.vectors;
      const Spectrum s = solve_weighted(p, cfg.t, k, o);
      const WeylTarget target = weyl_target(pr.mesh, pr.metric, pr.weight, pr.quad_order);
      summary["k_each"] = k;
      summary["spectrum"] = spectrum_info(s);
      summary["target"] = to_json(target);
      spectrum_checks(s, p, checks);
      write_text(out / "spectrum.csv", [&](std::ostream& os) { write_spectrum_csv(os, s, target); });
      if (cfg.svg) write_text(out / "counting.svg", [&](std::ostream& os) { emit_svg(os, s, target); });

      if (cfg.task == "weyl") {
        json fits = json::object();
        for (Sign sg : {Sign::Plus, Sign::Minus}) {
          const char* side = sg == Sign::Plus ? "plus" : "minus";
          const FitResult f = fit_limit(s, sg, cfg.window, target.c(sg));
          fits[side] = to_json(f);
          if (f.empty) {
            // An empty side must come with a vanishing target.
            checks.push_back(check(std::string("weyl_empty_") + side, target.c(sg) == 0.0 || !s.meta.complete(sg),
                                   {{"target", target.c(sg)}}));
            continue;
          }
          // The boundary-corrected slope decides; the raw tail ratio is reported.
          summary[std::string("rel_dev_") + side] = f.slope_rel_dev;
          summary[std::string("raw_rel_dev_") + side] = f.rel_dev;
          checks.push_back(check(std::string("weyl_fit_") + side, std::abs(f.slope_rel_dev) < cfg.weyl_tol,
                                 {{"slope_rel_dev", f.slope_rel_dev}, {"tol", cfg.weyl_tol}}));
        }
        summary["fits"] = fits;
      }
    } else if (cfg.task == "bracket") {
      const double t = cfg.t > 0.0 ? cfg.t : 1.0;
      const auto part = grid_partition(pr.mesh, cfg.partition_x, cfg.partition_y);
      const auto rep = check_bracketing(pr.mesh, part, pr.metric, pr.weight, pr.bc, t, cfg.k_max, so, pr.quad_order);
      write_json(out / "bracket.json", to_json(rep));
      summary["t"] = t;
      summary["bracket"] = {{"worst_margin", rep.worst_margin}, {"violations", rep.violations.size()}};
      checks.push_back(check("bracketing", rep.passed, {{"worst_margin", rep.worst_margin}, {"tol", rep.tol}}));
    } else if (cfg.task == "sandwich") {
      const auto rep = check_sandwich(pr, cfg.t_list, cfg.k_max, so);
      write_json(out / "sandwich.json", to_json(rep));
      summary["sandwich"] = {{"tau", rep.tau},
                             {"poincare_constant", rep.poincare},
                             {"worst_margin", rep.worst_margin},
                             {"shift_required", rep.shift_required}};
      checks.push_back(check("sandwich", rep.passed, {{"worst_margin", rep.worst_margin}, {"tol", rep.tol}}));
      if (rep.tau == 1) checks.push_back(check("tau_shift_required", rep.shift_required));
    } else if (cfg.task == "varprin") {
      const Pencil p = pr.assemble();
      summary["pencil"] = pencil_info(p);
      SolveOptions o = so;
      o.want_vectors = true;
      const int kmax = *std::max_element(cfg.k_list.begin(), cfg.k_list.end());
      const Spectrum s = solve_weighted(p, cfg.t, std::max(kmax, 1), o);
      summary["spectrum"] = spectrum_info(s);
      PrincipleOptions po;
      po.trials = cfg.trials;
      po.seed = cfg.seed;
      json reports = json::array();
      for (Sign sg : {Sign::Plus, Sign::Minus}) {
        for (int k : cfg.k_list) {
          if (k > static_cast<int>(s.side(sg).size())) continue;
          for (const auto& rep : {check_poincare_minmax(s, p, k, sg, po), check_rayleigh(s, p, k, sg, po),
                                  check_courant(s, p, k, sg, po)}) {
            reports.push_back(to_json(rep));
            checks.push_back(check(rep.name + "_" + (sg == Sign::Plus ? "plus" : "minus") + "_k" + std::to_string(k),
                                   rep.passed,
                                   {{"worst_margin", rep.worst_margin}, {"attainment_gap", rep.attainment_gap}}));
          }
        }
      }
      write_json(out / "varprin.json", reports);
    } else {
      throw ConfigError("task: unknown task '" + cfg.task + "'");
    }
  }

  summary["checks"] = checks;
  RunResult res;
  res.passed = all_pass(checks);
  summary["pass"] = res.passed;
  write_json(out / "summary.json", summary);
  res.summary = std::move(summary);
  log << cfg.task << ": " << (res.passed ? "pass" : "FAIL") << " (" << checks.size() << " checks), output in "
      << out.string() << '\n';
  return res;
}

int run_experiment(const std::string& task, const fs::path& config, const RunOverrides& ov, std::ostream& log,
                   std::ostream& err) {
  try {
    ExperimentConfig cfg = load_config(config);
    if (cfg.task_given && cfg.task != task)
      throw ConfigError("task: config names task '" + cfg.task + "' but the command is '" + task + "'");
    cfg.task = task;
    if (ov.out) cfg.out_dir = ov.out->string();
    if (ov.level) {
      if (*ov.level < 0) throw ConfigError("--level: must be >= 0");
      cfg.level = *ov.level;
      cfg.levels.clear();
    }
    if (ov.seed) cfg.seed = *ov.seed;
    return run(cfg, log).passed ? 0 : 1;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ModelingError& e) {
    err << "modeling error: " << e.what() << '\n';
    return 3;
  } catch (const MeshError& e) {
    err << "modeling error: " << e.what() << '\n';
    return 3;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return 4;
  } catch (const fs::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << '\n';
    return 4;
  }
}

} // namespace roughweyl
