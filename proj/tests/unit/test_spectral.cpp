#include "roughweyl/errors.hpp"
#include "roughweyl/specs.hpp"
#include "roughweyl/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace roughweyl;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

Pencil square(int n, const char* weight, BoundarySpec bc = BoundarySpec::dirichlet(),
              DiagonalPattern pattern = DiagonalPattern::Uniform) {
  return assemble(generate_unit_square(n, pattern), euclidean_metric(), parse_weight_spec(weight), bc);
}

SolveOptions with(SolverMethod m, bool vectors = false) {
  SolveOptions o;
  o.method = m;
  o.want_vectors = vectors;
  return o;
}

double rel_gap(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
  double g = 0.0;
  for (std::size_t i = 0; i < n; ++i) g = std::max(g, std::abs(a[i] - b[i]) / std::abs(b[i]));
  return g;
}

bool descending_positive(const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] > 0.0) || (i > 0 && v[i] > v[i - 1])) return false;
  return true;
}

} // namespace

TEST_SUITE("spectral") {

TEST_CASE("Laplace eigenvalues of the square") {
  const Pencil p = square(32, "const:1");
  const double oracle[] = {2, 5, 5, 8, 10};
  for (SolverMethod m : {SolverMethod::Dense, SolverMethod::Sparse}) {
    const LaplaceSpectrum L = solve_laplace(p, 5, with(m));
    REQUIRE(L.values.size() == 5);
    for (int i = 0; i < 5; ++i) {
      CAPTURE(i);
      CHECK(std::abs(L.values[i] / (kPi2 * oracle[i]) - 1.0) < 0.02);
    }
    CHECK(std::is_sorted(L.values.begin(), L.values.end()));
  }
}

TEST_CASE("Neumann Laplacian has a constant zero mode") {
  const Pencil p = square(12, "const:1", BoundarySpec::neumann());
  for (SolverMethod m : {SolverMethod::Dense, SolverMethod::Sparse}) {
    SolveOptions o = with(m, true);
    const LaplaceSpectrum L = solve_laplace(p, 3, o);
    CHECK(std::abs(L.values[0]) < 1e-9);
    CHECK(std::abs(L.values[1] / kPi2 - 1.0) < 0.02);
    const Vector v0 = L.vectors.col(0);
    CHECK((v0.array() - v0(0)).abs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("Lambda = 1/lambda against the weighted solve") {
  const Pencil p = square(20, "const:1");
  const LaplaceSpectrum L = solve_laplace(p, 20, with(SolverMethod::Dense));
  const Spectrum s = solve_weighted(p, 0.0, 20, with(SolverMethod::Dense));
  CHECK(s.neg.empty());
  CHECK(s.meta.complete_neg);
  for (int i = 0; i < 20; ++i) CHECK(std::abs(1.0 / s.pos[i] - L.values[i]) <= 1e-9 * L.values[i]);
  CHECK(std::abs(s.pos[0] * 2 * kPi2 - 1.0) < 0.01);
}

TEST_CASE("dense and sparse paths agree") {
  SUBCASE("definite weight, Dirichlet") {
    const Pencil p = square(24, "1 + x*y");
    const Spectrum d = solve_weighted(p, 0.0, 60, with(SolverMethod::Dense));
    const Spectrum s = solve_weighted(p, 0.0, 60, with(SolverMethod::Sparse));
    CHECK(s.meta.method != d.meta.method);
    REQUIRE(s.pos.size() == 60);
    CHECK(rel_gap(s.pos, d.pos, 60) < 1e-7);
  }
  SUBCASE("indefinite weight with t > 0") {
    const Pencil p = square(24, "checkerboard:n=2,a=1,b=-2", BoundarySpec::neumann());
    const Spectrum d = solve_weighted(p, 0.5, 40, with(SolverMethod::Dense));
    const Spectrum s = solve_weighted(p, 0.5, 40, with(SolverMethod::Sparse));
    CHECK(rel_gap(s.pos, d.pos, 40) < 1e-7);
    CHECK(rel_gap(s.neg, d.neg, 40) < 1e-7);
  }
  SUBCASE("Neumann on Z(rho)") {
    const Pencil p = square(24, "halves:2,-1", BoundarySpec::neumann());
    const Spectrum d = solve_weighted(p, 0.0, 40, with(SolverMethod::Dense));
    const Spectrum s = solve_weighted(p, 0.0, 40, with(SolverMethod::Sparse));
    CHECK(d.meta.constrained);
    CHECK(s.meta.constrained);
    CHECK(d.meta.working_dim == p.num_free() - 1);
    CHECK(rel_gap(s.pos, d.pos, 40) < 1e-7);
    CHECK(rel_gap(s.neg, d.neg, 40) < 1e-7);
  }
}

TEST_CASE("eigenvectors are energy-orthonormal and R-orthogonal") {
  const Pencil p = square(14, "x - 0.3", BoundarySpec::mixed({1, 2}));
  for (SolverMethod m : {SolverMethod::Dense, SolverMethod::Sparse}) {
    const double t = 0.25;
    const Spectrum s = solve_weighted(p, t, 15, with(m, true));
    REQUIRE(s.has_vectors());
    Matrix V(p.num_free(), s.vecs_pos.cols() + s.vecs_neg.cols());
    V << s.vecs_pos, s.vecs_neg;
    const SparseMatrix B = p.K_free + t * p.M_free;
    const Matrix G = V.transpose() * (B * V);
    CHECK((G - Matrix::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() < 1e-8);
    Vector lam(V.cols());
    for (Eigen::Index i = 0; i < s.vecs_pos.cols(); ++i) lam(i) = s.pos[i];
    for (Eigen::Index i = 0; i < s.vecs_neg.cols(); ++i) lam(s.vecs_pos.cols() + i) = -s.neg[i];
    const Matrix Rv = V.transpose() * (p.R_free * V);
    CHECK((Rv - Matrix(lam.asDiagonal())).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("constrained eigenvectors lie in Z(rho)") {
  const Pencil p = square(10, "halves:3,-1", BoundarySpec::neumann());
  const Spectrum s = solve_weighted(p, 0.0, 10, with(SolverMethod::Dense, true));
  for (const Matrix* V : {&s.vecs_pos, &s.vecs_neg})
    for (Eigen::Index j = 0; j < V->cols(); ++j) CHECK(std::abs(p.r.dot(V->col(j))) < 1e-12);
}

TEST_CASE("spectrum ordering and sign split") {
  const Pencil p = square(16, "checkerboard:n=2,a=2,b=-1");
  const Spectrum s = solve_weighted(p, 0.0, 30);
  CHECK(descending_positive(s.pos));
  CHECK(descending_positive(s.neg));
  CHECK(s.pos.size() == 30);
  CHECK(s.neg.size() == 30);
}

TEST_CASE("negating the weight swaps the sides exactly") {
  const Pencil a = square(12, "checkerboard:n=2,a=2,b=-1");
  const Pencil b = square(12, "checkerboard:n=2,a=-2,b=1");
  const Spectrum sa = solve_weighted(a, 0.0, 25, with(SolverMethod::Dense));
  const Spectrum sb = solve_weighted(b, 0.0, 25, with(SolverMethod::Dense));
  REQUIRE(sa.pos.size() == sb.neg.size());
  REQUIRE(sa.neg.size() == sb.pos.size());
  for (std::size_t i = 0; i < sa.pos.size(); ++i) CHECK(std::abs(sa.pos[i] - sb.neg[i]) <= 1e-12 * sa.pos[i]);
  for (std::size_t i = 0; i < sa.neg.size(); ++i) CHECK(std::abs(sa.neg[i] - sb.pos[i]) <= 1e-12 * sa.neg[i]);
}

TEST_CASE("mirror-symmetric halves give equal sides") {
  const Pencil p = square(16, "halves:1,-1", BoundarySpec::dirichlet(), DiagonalPattern::Mirrored);
  for (SolverMethod m : {SolverMethod::Dense, SolverMethod::Sparse}) {
    const Spectrum s = solve_weighted(p, 0.0, 40, with(m));
    for (int i = 0; i < 40; ++i) CHECK(std::abs(s.pos[i] - s.neg[i]) <= 1e-9);
  }
}

TEST_CASE("eigenvalues decrease as t grows") {
  // The Dirichlet form is coercive at t = 0, so the sweep can start there.
  // Neumann with tau = 1 solves t = 0 on Z(rho) instead, which is not
  // comparable, so that sweep starts at the first positive t.
  auto sweep = [](const Pencil& p, std::vector<double> ts) {
    Spectrum prev = solve_weighted(p, ts[0], 20, with(SolverMethod::Dense));
    for (std::size_t j = 1; j < ts.size(); ++j) {
      const Spectrum s = solve_weighted(p, ts[j], 20, with(SolverMethod::Dense));
      for (int i = 0; i < 20; ++i) {
        CHECK(s.pos[i] <= prev.pos[i] * (1 + 1e-12));
        CHECK(s.neg[i] <= prev.neg[i] * (1 + 1e-12));
      }
      prev = s;
    }
  };
  sweep(square(12, "halves:2,-1"), {0.0, 0.02, 0.1, 0.5, 1.0});
  sweep(square(12, "halves:2,-1", BoundarySpec::neumann()), {0.02, 0.1, 0.5, 1.0});
}

TEST_CASE("element order does not change the spectrum") {
  const Mesh m = generate_unit_square(14);
  std::vector<int> perm(m.num_triangles());
  for (int i = 0; i < m.num_triangles(); ++i) perm[i] = m.num_triangles() - 1 - i;
  const WeightField w = parse_weight_spec("x - 0.4");
  const Pencil a = assemble(m, euclidean_metric(), w, BoundarySpec::dirichlet());
  const Pencil b = assemble(permute_triangles(m, perm), euclidean_metric(), w, BoundarySpec::dirichlet());
  for (SolverMethod meth : {SolverMethod::Dense, SolverMethod::Sparse}) {
    const Spectrum sa = solve_weighted(a, 0.0, 20, with(meth));
    const Spectrum sb = solve_weighted(b, 0.0, 20, with(meth));
    CHECK(rel_gap(sa.pos, sb.pos, 20) < 1e-12);
    CHECK(rel_gap(sa.neg, sb.neg, 20) < 1e-12);
  }
}

TEST_CASE("sparse solves are deterministic") {
  const Pencil p = square(30, "checkerboard:n=3,a=1,b=-1");
  const Spectrum a = solve_weighted(p, 0.0, 30, with(SolverMethod::Sparse));
  const Spectrum b = solve_weighted(p, 0.0, 30, with(SolverMethod::Sparse));
  CHECK(a.pos == b.pos);
  CHECK(a.neg == b.neg);
}

TEST_CASE("Z(rho) constraint") {
  SUBCASE("Neumann, constant weight: zero mode removed") {
    const Pencil p = square(32, "const:1", BoundarySpec::neumann());
    CHECK(p.tau == 1);
    const ConstraintProjection c = project_constraint(p);
    CHECK(c.active);
    CHECK(c.working_dim == p.num_free() - 1);
    const Spectrum s = solve_weighted(p, 0.0, 5);
    CHECK(std::abs(s.pos[0] * kPi2 - 1.0) < 0.01);
    const Vector projected = c.project(Vector::Ones(p.num_free()));
    CHECK(std::abs(c.r.dot(projected)) < 1e-12);
  }
  SUBCASE("Dirichlet: identity projector") {
    const Pencil p = square(8, "const:1");
    const ConstraintProjection c = project_constraint(p);
    CHECK_FALSE(c.active);
    CHECK(c.working_dim == p.num_free());
    const Vector v = Vector::LinSpaced(p.num_free(), 0, 1);
    CHECK(c.project(v) == v);
  }
  SUBCASE("zero mean weight is a modeling error") {
    const Pencil p = square(8, "halves:1,-1", BoundarySpec::neumann());
    CHECK_THROWS_AS(project_constraint(p), ModelingError);
    CHECK_THROWS_AS(solve_weighted(p, 0.0, 5), ModelingError);
    CHECK_NOTHROW(solve_weighted(p, 0.1, 5));
  }
}

TEST_CASE("multiplicities are grouped") {
  Spectrum s;
  s.pos = {0.5, 0.2 + 5e-9, 0.2, 0.1, 0.1 - 1e-7};
  const auto g = s.grouped(Sign::Plus);
  REQUIRE(g.size() == 4);
  CHECK(g[0].second == 1);
  CHECK(g[1].second == 2);
  CHECK(g[2].second == 1);
  CHECK(g[3].second == 1);
  CHECK(s.grouped(Sign::Minus).empty());
}

TEST_CASE("empty sides are complete") {
  const Pencil p = square(40, "const:2");
  const Spectrum s = solve_weighted(p, 0.0, 10, with(SolverMethod::Sparse));
  CHECK(s.neg.empty());
  CHECK(s.meta.complete_neg);
  CHECK_FALSE(s.meta.complete_pos);
}

} // TEST_SUITE
