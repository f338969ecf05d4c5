#include "roughweyl/varprin.hpp"

#include "roughweyl/errors.hpp"
#include "roughweyl/parallel.hpp"
#include "roughweyl/working_form.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace roughweyl {

using Eigen::Index;

namespace {

const char* sign_name(Sign s) { return s == Sign::Plus ? "plus" : "minus"; }

double sigma(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }

class Gaussian {
public:
  explicit Gaussian(std::uint64_t seed) : gen_(seed) {}
  Matrix matrix(Index rows, Index cols) {
    Matrix X(rows, cols);
    for (Index c = 0; c < cols; ++c)
      for (Index r = 0; r < rows; ++r) X(r, c) = normal_(gen_);
    return X;
  }

private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Shared state of the sampled-subspace checks.
struct Setting {
  const Pencil& p;
  Sign sign;
  int k;
  SparseMatrix B; // K + t Mm on the free space
  Matrix phi;     // eigenvectors of the requested sign, B-normalized
  double lambda_k;
  bool constrained;

  Setting(const Spectrum& s, const Pencil& pen, int kk, Sign sg, const char* who)
      : p(pen), sign(sg), k(kk), B(detail::energy_matrix(pen, s.meta.t)), constrained(s.meta.constrained) {
    if (k < 1) throw SolverError(std::string(who) + ": k must be >= 1");
    const auto& values = s.side(sign);
    if (static_cast<int>(values.size()) < k)
      throw SolverError(std::string(who) + ": spectrum has fewer than k = " + std::to_string(k) + " " +
                        sign_name(sign) + " eigenvalues");
    if (s.vectors(sign).cols() < k)
      throw SolverError(std::string(who) + ": eigenvectors are required");
    phi = s.vectors(sign).leftCols(k);
    lambda_k = values[static_cast<std::size_t>(k - 1)];
  }

  void project(Matrix& X) const {
    if (!constrained) return;
    const double rr = p.r.squaredNorm();
    const Eigen::RowVectorXd c = p.r.transpose() * X;
    X.noalias() -= p.r * (c / rr);
  }

  // Gaussian columns rescaled to B-norm `size`.
  Matrix noise(Gaussian& rng, Index cols, double size) const {
    Matrix G = rng.matrix(p.num_free(), cols);
    project(G);
    const Matrix BG = B * G;
    for (Index c = 0; c < cols; ++c) {
      const double nrm = std::sqrt(std::max(0.0, G.col(c).dot(BG.col(c))));
      if (nrm > 0.0) G.col(c) *= size / nrm;
    }
    return G;
  }

  double ratio(const Vector& u) const {
    const double den = u.dot(B * u);
    return sigma(sign) * u.dot(p.R_free * u) / den;
  }
};

// Smallest generalized eigenvalue of (sigma V^T R V, V^T B V); false if
// the Gram matrix is numerically singular.
bool projected_min(const Setting& st, const Matrix& V, double& out) {
  const Matrix BV = st.B * V;
  Matrix G = V.transpose() * BV;
  G = 0.5 * (G + G.transpose()).eval();
  Matrix A = sigma(st.sign) * (V.transpose() * (st.p.R_free * V));
  A = 0.5 * (A + A.transpose()).eval();
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success) return false;
  const Vector d = Matrix(llt.matrixL()).diagonal();
  if (d.minCoeff() <= 1e-7 * d.maxCoeff()) return false;
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(A, G, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) return false;
  out = es.eigenvalues()(0);
  return std::isfinite(out);
}

PrincipleReport start_report(const char* name, const Setting& st, const PrincipleOptions& o) {
  PrincipleReport r;
  r.name = name;
  r.sign = st.sign;
  r.k = st.k;
  r.trials = o.trials;
  r.tol = o.tol;
  r.worst_margin = std::numeric_limits<double>::infinity();
  return r;
}

void record(PrincipleReport& r, double margin) {
  r.worst_margin = std::min(r.worst_margin, margin);
  if (margin < -r.tol) ++r.violations;
}

void finish(PrincipleReport& r, double lambda_k) {
  r.attainment_gap = std::abs(r.attained - lambda_k);
  if (r.trials == 0) r.worst_margin = 0.0;
  r.passed = r.violations == 0 && r.attainment_gap <= r.tol;
}

constexpr int kMaxRedraws = 50;

} // namespace

PrincipleReport check_poincare_minmax(const Spectrum& s, const Pencil& p, int k, Sign sign,
                                      const PrincipleOptions& opts) {
  const Setting st(s, p, k, sign, "check_poincare_minmax");
  PrincipleReport rep = start_report("poincare_minmax", st, opts);
  Gaussian rng(opts.seed);

  if (!projected_min(st, st.phi, rep.attained))
    throw SolverError("check_poincare_minmax: eigenvector Gram matrix is singular");

  for (int trial = 0; trial < opts.trials; ++trial) {
    double value = 0.0;
    int redraw = 0;
    for (;;) {
      Matrix V;
      if (trial % 2 == 0) {
        V = rng.matrix(p.num_free(), k);
        st.project(V);
      } else {
        V = st.phi + st.noise(rng, k, opts.perturbation);
      }
      if (projected_min(st, V, value)) break;
      ++rep.resampled;
      if (++redraw > kMaxRedraws) throw SolverError("check_poincare_minmax: cannot draw a nondegenerate subspace");
    }
    record(rep, st.lambda_k - value);
  }
  finish(rep, st.lambda_k);
  return rep;
}

PrincipleReport check_rayleigh(const Spectrum& s, const Pencil& p, int k, Sign sign, const PrincipleOptions& opts) {
  const Setting st(s, p, k, sign, "check_rayleigh");
  PrincipleReport rep = start_report("rayleigh", st, opts);
  Gaussian rng(opts.seed);
  const Matrix prev = st.phi.leftCols(k - 1);
  const Matrix Bprev = st.B * prev;

  rep.attained = st.ratio(st.phi.col(k - 1));

  for (int trial = 0; trial < opts.trials; ++trial) {
    double value = 0.0;
    int redraw = 0;
    for (;;) {
      Matrix u;
      if (trial % 2 == 0) {
        u = rng.matrix(p.num_free(), 1);
        st.project(u);
      } else {
        u = st.phi.col(k - 1) + st.noise(rng, 1, opts.perturbation);
      }
      const double before = std::sqrt(u.col(0).dot(st.B * u.col(0)));
      for (int pass = 0; pass < 2 && k > 1; ++pass) u.noalias() -= prev * (Bprev.transpose() * u);
      const double after = std::sqrt(u.col(0).dot(st.B * u.col(0)));
      if (std::isfinite(after) && after > 1e-8 * before) {
        value = st.ratio(u.col(0));
        break;
      }
      ++rep.resampled;
      if (++redraw > kMaxRedraws) throw SolverError("check_rayleigh: cannot draw a nondegenerate vector");
    }
    record(rep, st.lambda_k - value);
  }
  finish(rep, st.lambda_k);
  return rep;
}

PrincipleReport check_courant(const Spectrum& s, const Pencil& p, int k, Sign sign, const PrincipleOptions& opts) {
  const Setting st(s, p, k, sign, "check_courant");
  PrincipleReport rep = start_report("courant", st, opts);
  Gaussian rng(opts.seed);

  const auto form = detail::dense_working_form(p, p.R_free, s.meta.t, st.constrained ? &p.r : nullptr);
  const Matrix S = sigma(sign) * form.S;
  const Index d = S.rows();
  if (k > d) throw SolverError("check_courant: k exceeds the working dimension");
  const Matrix Y = form.to_coords(st.phi); // orthonormal coordinates of the eigenvectors

  // max of y^T S y / y^T y over the orthogonal complement of span(Q0); false if Q0 is rank deficient.
  auto complement_max = [&](const Matrix& Q0, double& out) {
    if (Q0.cols() == 0) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
      out = es.eigenvalues()(d - 1);
      return true;
    }
    Eigen::HouseholderQR<Matrix> qr(Q0);
    const Vector rd = qr.matrixQR().diagonal().head(Q0.cols()).cwiseAbs();
    if (rd.minCoeff() <= 1e-8 * rd.maxCoeff()) return false;
    const Matrix Q = qr.householderQ();
    const Matrix C = Q.rightCols(d - Q0.cols());
    Matrix P = C.transpose() * S * C;
    P = 0.5 * (P + P.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(P, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) return false;
    out = es.eigenvalues()(P.rows() - 1);
    return true;
  };

  if (!complement_max(Y.leftCols(k - 1), rep.attained))
    throw SolverError("check_courant: eigenvector coordinates are rank deficient");

  for (int trial = 0; trial < opts.trials; ++trial) {
    double value = 0.0;
    int redraw = 0;
    for (;;) {
      Matrix Q0;
      if (trial % 2 == 0 || k == 1) {
        Q0 = rng.matrix(d, k - 1);
      } else {
        Q0 = Y.leftCols(k - 1) + opts.perturbation * rng.matrix(d, k - 1) / std::sqrt(static_cast<double>(d));
      }
      if (complement_max(Q0, value)) break;
      ++rep.resampled;
      if (++redraw > kMaxRedraws) throw SolverError("check_courant: cannot draw a nondegenerate subspace");
    }
    record(rep, value - st.lambda_k);
  }
  finish(rep, st.lambda_k);
  return rep;
}

// ---------------------------------------------------------------------------
// Bracketing

std::vector<std::vector<int>> grid_partition(const Mesh& m, int nx, int ny) {
  if (nx < 1 || ny < 1) throw MeshError("grid_partition: nx and ny must be >= 1");
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  for (const auto& v : m.vertices) {
    x0 = std::min(x0, v.x());
    x1 = std::max(x1, v.x());
    y0 = std::min(y0, v.y());
    y1 = std::max(y1, v.y());
  }
  std::vector<std::vector<int>> cells(static_cast<std::size_t>(nx * ny));
  for (int t = 0; t < m.num_triangles(); ++t) {
    const Point c = m.centroid(t);
    const int i = std::clamp(static_cast<int>(std::floor((c.x() - x0) / (x1 - x0) * nx)), 0, nx - 1);
    const int j = std::clamp(static_cast<int>(std::floor((c.y() - y0) / (y1 - y0) * ny)), 0, ny - 1);
    cells[static_cast<std::size_t>(j * nx + i)].push_back(t);
  }
  return cells;
}

namespace {

struct SubMesh {
  Mesh mesh;
  std::vector<int> global_vertex; // local -> global
};

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

constexpr int kInterfaceTag = -1;

SubMesh extract_cell(const Mesh& m, const std::vector<int>& cell, const std::map<std::uint64_t, int>& boundary_tag) {
  SubMesh sm;
  std::map<int, int> local;
  for (int t : cell)
    for (int v : m.triangles[t])
      if (local.emplace(v, 0).second) sm.global_vertex.push_back(v);
  std::sort(sm.global_vertex.begin(), sm.global_vertex.end());
  for (std::size_t i = 0; i < sm.global_vertex.size(); ++i) local[sm.global_vertex[i]] = static_cast<int>(i);

  sm.mesh.level = m.level;
  for (int v : sm.global_vertex) sm.mesh.vertices.push_back(m.vertices[v]);
  std::map<std::uint64_t, std::pair<std::array<int, 2>, int>> edges;
  for (int t : cell) {
    const auto& tri = m.triangles[t];
    sm.mesh.triangles.push_back({local[tri[0]], local[tri[1]], local[tri[2]]});
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e], b = tri[(e + 1) % 3];
      auto& slot = edges[edge_key(a, b)];
      slot.first = {a, b};
      ++slot.second;
    }
  }
  for (const auto& [key, val] : edges) {
    if (val.second != 1) continue;
    const auto it = boundary_tag.find(key);
    const int tag = it == boundary_tag.end() ? kInterfaceTag : it->second;
    sm.mesh.boundary_edges.push_back({{local[val.first[0]], local[val.first[1]]}, tag});
  }
  return sm;
}

std::vector<double> padded(std::vector<double> v, int k) {
  std::sort(v.begin(), v.end(), std::greater<>());
  v.resize(static_cast<std::size_t>(k), 0.0);
  return v;
}

// All eigenvalues when the dense path applies, otherwise the top k per sign.
Spectrum solve_for_bracket(const Pencil& p, double t, int k, const SolveOptions& opts) {
  const bool dense = opts.method == SolverMethod::Dense ||
                     (opts.method == SolverMethod::Auto && p.num_free() <= opts.dense_limit);
  Spectrum s = solve_weighted(p, t, dense ? 0 : k, opts);
  for (Sign sg : {Sign::Plus, Sign::Minus})
    if (static_cast<int>(s.side(sg).size()) < k && !s.meta.complete(sg))
      throw SolverError("check_bracketing: incomplete spectrum on a subproblem");
  return s;
}

} // namespace

BracketReport check_bracketing(const Mesh& m, const std::vector<std::vector<int>>& partition, const MetricField& g,
                               const WeightField& w, const BoundarySpec& bc, double t, int k_max,
                               const SolveOptions& opts, int quad_order) {
  if (!(t > 0.0)) throw ModelingError("check_bracketing: t must be > 0");
  if (k_max < 1) throw ModelingError("check_bracketing: k_max must be >= 1");
  if (partition.empty()) throw MeshError("check_bracketing: empty partition");

  std::vector<int> owner(static_cast<std::size_t>(m.num_triangles()), -1);
  for (std::size_t c = 0; c < partition.size(); ++c) {
    if (partition[c].empty()) throw MeshError("check_bracketing: partition cell " + std::to_string(c) + " is empty");
    for (int tri : partition[c]) {
      if (tri < 0 || tri >= m.num_triangles())
        throw MeshError("check_bracketing: triangle index " + std::to_string(tri) + " out of range");
      if (owner[tri] >= 0)
        throw MeshError("check_bracketing: triangle " + std::to_string(tri) + " belongs to two cells");
      owner[tri] = static_cast<int>(c);
    }
  }
  for (std::size_t tri = 0; tri < owner.size(); ++tri)
    if (owner[tri] < 0) throw MeshError("check_bracketing: triangle " + std::to_string(tri) + " is not covered");

  // Vertices touched by more than one cell.
  std::vector<int> first_cell(static_cast<std::size_t>(m.num_vertices()), -1);
  std::vector<char> shared(static_cast<std::size_t>(m.num_vertices()), 0);
  for (int tri = 0; tri < m.num_triangles(); ++tri) {
    for (int v : m.triangles[tri]) {
      if (first_cell[v] < 0) first_cell[v] = owner[tri];
      else if (first_cell[v] != owner[tri]) shared[v] = 1;
    }
  }

  std::map<std::uint64_t, int> boundary_tag;
  for (const auto& e : m.boundary_edges) boundary_tag[edge_key(e.v[0], e.v[1])] = e.tag;

  const auto norm_bc = bc.normalized(m.tags());
  const auto global_mask = dirichlet_vertices(m, norm_bc);
  const Pencil global = assemble_with_mask(m, g, w, global_mask, norm_bc, quad_order);

  WeightField local_w = w;
  local_w.nonzero_mean_required = false; // t > 0 makes every subproblem coercive

  const std::size_t cells = partition.size();
  std::vector<Spectrum> dir(cells), neu(cells);
  std::vector<char> dir_empty(cells, 0), neu_empty(cells, 0);
  Spectrum glob;

  parallel_for(2 * cells + 1, [&](std::size_t job) {
    if (job == 2 * cells) {
      glob = solve_for_bracket(global, t, k_max, opts);
      return;
    }
    const std::size_t c = job / 2;
    const bool dirichlet = job % 2 == 0;
    const SubMesh sm = extract_cell(m, partition[c], boundary_tag);
    std::vector<char> mask(sm.global_vertex.size(), 0);
    bool any_free = false;
    for (std::size_t i = 0; i < sm.global_vertex.size(); ++i) {
      const int v = sm.global_vertex[i];
      mask[i] = global_mask[v] || (dirichlet && shared[v]);
      if (!mask[i]) any_free = true;
    }
    if (!any_free) {
      (dirichlet ? dir_empty : neu_empty)[c] = 1;
      return;
    }
    const Pencil sub = assemble_with_mask(sm.mesh, g, local_w, mask, norm_bc, quad_order);
    (dirichlet ? dir[c] : neu[c]) = solve_for_bracket(sub, t, k_max, opts);
  });

  BracketReport rep;
  rep.t = t;
  rep.k_max = k_max;
  rep.cells = static_cast<int>(cells);
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (Sign sg : {Sign::Plus, Sign::Minus}) {
    std::vector<double> nu, eta;
    for (std::size_t c = 0; c < cells; ++c) {
      if (!dir_empty[c]) nu.insert(nu.end(), dir[c].side(sg).begin(), dir[c].side(sg).end());
      if (!neu_empty[c]) eta.insert(eta.end(), neu[c].side(sg).begin(), neu[c].side(sg).end());
    }
    const auto nu_k = padded(nu, k_max);
    const auto eta_k = padded(eta, k_max);
    const auto lam_k = padded(glob.side(sg), k_max);
    auto& rows = sg == Sign::Plus ? rep.plus : rep.minus;
    for (int k = 1; k <= k_max; ++k) {
      const std::size_t i = static_cast<std::size_t>(k - 1);
      rows.push_back({k, nu_k[i], lam_k[i], eta_k[i]});
      const double m_lo = lam_k[i] - nu_k[i];
      const double m_hi = eta_k[i] - lam_k[i];
      rep.worst_margin = std::min({rep.worst_margin, m_lo, m_hi});
      std::ostringstream msg;
      msg.precision(17);
      if (m_lo < -rep.tol) {
        msg << sign_name(sg) << " k=" << k << ": nu=" << nu_k[i] << " > lambda=" << lam_k[i];
        rep.violations.push_back(msg.str());
      }
      if (m_hi < -rep.tol) {
        msg.str("");
        msg << sign_name(sg) << " k=" << k << ": lambda=" << lam_k[i] << " > eta=" << eta_k[i];
        rep.violations.push_back(msg.str());
      }
    }
  }
  rep.passed = rep.violations.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// Sandwich

namespace {

double entry(const Spectrum& s, Sign sg, int k, const char* what) {
  const auto& v = s.side(sg);
  if (k <= static_cast<int>(v.size())) return v[static_cast<std::size_t>(k - 1)];
  if (!s.meta.complete(sg))
    throw SolverError(std::string("check_sandwich: ") + what + " spectrum is too short");
  return 0.0;
}

} // namespace

SandwichReport check_sandwich(const Problem& problem, const std::vector<double>& t_list, int k_max,
                              const SolveOptions& opts) {
  if (k_max < 1) throw ModelingError("check_sandwich: k_max must be >= 1");
  if (t_list.empty()) throw ModelingError("check_sandwich: empty t list");
  for (double t : t_list)
    if (!(t > 0.0 && t < 1.0)) throw ModelingError("check_sandwich: every t must lie in (0, 1)");

  const Pencil p = problem.assemble();
  SandwichReport rep;
  rep.tau = p.tau;
  rep.k_max = k_max;
  rep.poincare = poincare_constant(p);
  rep.worst_margin = std::numeric_limits<double>::infinity();
  const int need = k_max + p.tau;

  const Spectrum base = solve_weighted(p, 0.0, k_max, opts);
  std::vector<Spectrum> lower(t_list.size()), upper(t_list.size());
  parallel_for(2 * t_list.size(), [&](std::size_t job) {
    const std::size_t i = job / 2;
    if (job % 2 == 0) lower[i] = solve_weighted(p, t_list[i], need, opts);
    else upper[i] = solve_weighted(p, rep.poincare * t_list[i], k_max, opts);
  });

  for (std::size_t i = 0; i < t_list.size(); ++i) {
    const double t = t_list[i];
    SandwichCase c;
    c.t = t;
    c.worst_margin = std::numeric_limits<double>::infinity();
    c.unshifted_margin = std::numeric_limits<double>::infinity();
    for (Sign sg : {Sign::Plus, Sign::Minus}) {
      auto& rows = sg == Sign::Plus ? c.plus : c.minus;
      for (int k = 1; k <= k_max; ++k) {
        SandwichRow row;
        row.k = k;
        row.value = entry(base, sg, k, "base");
        row.lower = entry(lower[i], sg, k + p.tau, "lower");
        row.upper = entry(upper[i], sg, k, "upper") / (1.0 - t);
        rows.push_back(row);
        const double m_lo = row.value - row.lower;
        const double m_hi = row.upper - row.value;
        c.worst_margin = std::min({c.worst_margin, m_lo, m_hi});
        if (p.tau == 1) c.unshifted_margin = std::min(c.unshifted_margin, row.value - entry(lower[i], sg, k, "lower"));
        std::ostringstream msg;
        msg.precision(17);
        if (m_lo < -rep.tol) {
          msg << "t=" << t << ' ' << sign_name(sg) << " k=" << k << ": lambda_{k+tau}(t)=" << row.lower
              << " > lambda_k=" << row.value;
          rep.violations.push_back(msg.str());
        }
        if (m_hi < -rep.tol) {
          msg.str("");
          msg << "t=" << t << ' ' << sign_name(sg) << " k=" << k << ": lambda_k=" << row.value
              << " > upper=" << row.upper;
          rep.violations.push_back(msg.str());
        }
      }
    }
    if (p.tau == 1 && c.unshifted_margin < -rep.tol) rep.shift_required = true;
    if (p.tau != 1) c.unshifted_margin = c.worst_margin;
    rep.worst_margin = std::min(rep.worst_margin, c.worst_margin);
    rep.cases.push_back(std::move(c));
  }
  rep.passed = rep.violations.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const PrincipleReport& r) {
  return {{"name", r.name},
          {"sign", sign_name(r.sign)},
          {"k", r.k},
          {"trials", r.trials},
          {"resampled", r.resampled},
          {"violations", r.violations},
          {"worst_margin", r.worst_margin},
          {"attained", r.attained},
          {"attainment_gap", r.attainment_gap},
          {"tol", r.tol},
          {"pass", r.passed}};
}

nlohmann::json to_json(const BracketReport& r) {
  auto rows = [](const std::vector<BracketRow>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& row : v) a.push_back({{"k", row.k}, {"nu", row.nu}, {"lambda", row.lambda}, {"eta", row.eta}});
    return a;
  };
  return {{"name", "bracketing"},
          {"t", r.t},
          {"k_range", {1, r.k_max}},
          {"cells", r.cells},
          {"worst_margin", r.worst_margin},
          {"tol", r.tol},
          {"violations", r.violations},
          {"plus", rows(r.plus)},
          {"minus", rows(r.minus)},
          {"pass", r.passed}};
}

nlohmann::json to_json(const SandwichReport& r) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : r.cases) {
    auto rows = [](const std::vector<SandwichRow>& v) {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& row : v)
        a.push_back({{"k", row.k}, {"lower", row.lower}, {"value", row.value}, {"upper", row.upper}});
      return a;
    };
    cases.push_back({{"t", c.t},
                     {"worst_margin", c.worst_margin},
                     {"unshifted_margin", c.unshifted_margin},
                     {"plus", rows(c.plus)},
                     {"minus", rows(c.minus)}});
  }
  return {{"name", "sandwich"},
          {"tau", r.tau},
          {"poincare_constant", r.poincare},
          {"k_range", {1, r.k_max}},
          {"shift_required", r.shift_required},
          {"worst_margin", r.worst_margin},
          {"tol", r.tol},
          {"violations", r.violations},
          {"cases", cases},
          {"pass", r.passed}};
}

} // namespace roughweyl
