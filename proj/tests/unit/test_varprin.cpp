#include "roughweyl/errors.hpp"
#include "roughweyl/specs.hpp"
#include "roughweyl/varprin.hpp"

#include <doctest.h>

#include <cmath>

using namespace roughweyl;

namespace {

Spectrum dense_with_vectors(const Pencil& p, double t, int k) {
  SolveOptions o;
  o.method = SolverMethod::Dense;
  o.want_vectors = true;
  return solve_weighted(p, t, k, o);
}

Problem square_problem(int n, const char* weight, BoundarySpec bc) {
  Problem pr;
  pr.mesh = generate_unit_square(n);
  pr.metric = euclidean_metric();
  pr.weight = parse_weight_spec(weight);
  pr.bc = bc;
  return pr;
}

} // namespace

TEST_SUITE("varprin") {

TEST_CASE("variational principles on the Dirichlet square") {
  const Pencil p = assemble(generate_unit_square(12), euclidean_metric(), constant_weight(1), BoundarySpec::dirichlet());
  const Spectrum s = dense_with_vectors(p, 0.0, 12);
  PrincipleOptions o;
  o.trials = 100;
  for (int k : {1, 3, 7}) {
    CAPTURE(k);
    for (const PrincipleReport& r :
         {check_poincare_minmax(s, p, k, Sign::Plus, o), check_rayleigh(s, p, k, Sign::Plus, o),
          check_courant(s, p, k, Sign::Plus, o)}) {
      CAPTURE(r.name);
      CHECK(r.passed);
      CHECK(r.violations == 0);
      CHECK(r.trials == 100);
      CHECK(r.worst_margin >= -1e-9);
      CHECK(r.attainment_gap <= 1e-9);
    }
  }
  // Perturbed trials come close to the bound, Gaussian ones do not need to.
  const PrincipleReport r = check_poincare_minmax(s, p, 3, Sign::Plus, o);
  CHECK(r.worst_margin < 1e-3 * s.pos[2]);
}

TEST_CASE("variational principles on both sides of an indefinite pencil") {
  const Pencil p =
      assemble(generate_unit_square(10), euclidean_metric(), parse_weight_spec("checkerboard:n=2,a=1,b=-3"),
               BoundarySpec::neumann());
  for (double t : {0.0, 0.5}) {
    const Spectrum s = dense_with_vectors(p, t, 6);
    PrincipleOptions o;
    o.trials = 40;
    o.seed = 7;
    for (Sign sg : {Sign::Plus, Sign::Minus}) {
      for (int k : {1, 2, 5}) {
        CAPTURE(t);
        CAPTURE(k);
        CHECK(check_poincare_minmax(s, p, k, sg, o).passed);
        CHECK(check_rayleigh(s, p, k, sg, o).passed);
        CHECK(check_courant(s, p, k, sg, o).passed);
      }
    }
  }
}

TEST_CASE("principle checks are deterministic and validate inputs") {
  const Pencil p = assemble(generate_unit_square(8), euclidean_metric(), constant_weight(1), BoundarySpec::dirichlet());
  const Spectrum s = dense_with_vectors(p, 0.0, 4);
  PrincipleOptions o;
  o.trials = 20;
  const auto a = to_json(check_courant(s, p, 2, Sign::Plus, o));
  const auto b = to_json(check_courant(s, p, 2, Sign::Plus, o));
  CHECK(a.dump() == b.dump());
  CHECK_THROWS_AS(check_rayleigh(s, p, 0, Sign::Plus, o), SolverError);
  CHECK_THROWS_AS(check_rayleigh(s, p, 5, Sign::Plus, o), SolverError);
  CHECK_THROWS_AS(check_rayleigh(s, p, 1, Sign::Minus, o), SolverError);
  SolveOptions no_vec;
  no_vec.method = SolverMethod::Dense;
  CHECK_THROWS_AS(check_poincare_minmax(solve_weighted(p, 0.0, 4, no_vec), p, 1, Sign::Plus, o), SolverError);
}

TEST_CASE("bracketing") {
  const Mesh m = generate_unit_square(12);
  const MetricField g = euclidean_metric();
  SUBCASE("one cell degenerates to equalities") {
    const auto rep = check_bracketing(m, grid_partition(m, 1, 1), g, constant_weight(1), BoundarySpec::dirichlet(), 1.0, 20);
    CHECK(rep.passed);
    for (const auto& row : rep.plus) {
      CHECK(std::abs(row.nu - row.lambda) <= 1e-12 * row.lambda);
      CHECK(std::abs(row.eta - row.lambda) <= 1e-12 * row.lambda);
    }
  }
  SUBCASE("left and right halves, constant weight") {
    const auto rep = check_bracketing(m, grid_partition(m, 2, 1), g, constant_weight(1), BoundarySpec::dirichlet(), 1.0, 50);
    CHECK(rep.passed);
    CHECK(rep.cells == 2);
    CHECK(rep.plus.size() == 50);
    CHECK(rep.worst_margin >= -1e-9);
    // Halving the domain strictly lowers the Dirichlet sequence.
    CHECK(rep.plus[0].nu < rep.plus[0].lambda);
  }
  SUBCASE("checkerboard weight on a 2 x 2 partition") {
    const auto rep = check_bracketing(m, grid_partition(m, 2, 2), g, parse_weight_spec("checkerboard:n=2,a=1,b=-1"),
                                      BoundarySpec::neumann(), 1.0, 30);
    CHECK(rep.passed);
    CHECK(rep.minus.size() == 30);
    for (const auto& row : rep.minus) {
      CHECK(row.nu <= row.lambda + 1e-9);
      CHECK(row.lambda <= row.eta + 1e-9);
    }
  }
  SUBCASE("merged sequences are sorted") {
    const auto rep = check_bracketing(m, grid_partition(m, 3, 1), g, parse_weight_spec("x - 0.3"),
                                      BoundarySpec::dirichlet(), 1.0, 25);
    for (const auto* rows : {&rep.plus, &rep.minus})
      for (std::size_t i = 1; i < rows->size(); ++i) {
        CHECK((*rows)[i].nu <= (*rows)[i - 1].nu);
        CHECK((*rows)[i].eta <= (*rows)[i - 1].eta);
      }
  }
  SUBCASE("invalid partitions") {
    auto cells = grid_partition(m, 2, 1);
    cells[0].pop_back();
    CHECK_THROWS_AS(check_bracketing(m, cells, g, constant_weight(1), BoundarySpec::dirichlet(), 1.0, 5), MeshError);
    cells = grid_partition(m, 2, 1);
    cells[1].push_back(cells[0][0]);
    CHECK_THROWS_AS(check_bracketing(m, cells, g, constant_weight(1), BoundarySpec::dirichlet(), 1.0, 5), MeshError);
    CHECK_THROWS_AS(check_bracketing(m, grid_partition(m, 2, 1), g, constant_weight(1), BoundarySpec::dirichlet(), 0.0, 5),
                    ModelingError);
    CHECK_THROWS_AS(grid_partition(m, 0, 1), MeshError);
  }
}

TEST_CASE("grid partition covers every triangle once") {
  const Mesh m = generate_disk(6);
  const auto cells = grid_partition(m, 2, 2);
  std::vector<int> seen(m.num_triangles(), 0);
  for (const auto& c : cells)
    for (int t : c) ++seen[t];
  CHECK(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; }));
  CHECK(cells.size() == 4);
}

TEST_CASE("sandwich") {
  SUBCASE("Dirichlet, tau = 0") {
    const auto rep = check_sandwich(square_problem(14, "const:1", BoundarySpec::dirichlet()), {0.1}, 100);
    CHECK(rep.tau == 0);
    CHECK(rep.passed);
    CHECK(rep.worst_margin >= -1e-9);
    CHECK_FALSE(rep.shift_required);
  }
  SUBCASE("Neumann, constant weight: the index shift is needed") {
    const auto rep = check_sandwich(square_problem(14, "const:1", BoundarySpec::neumann()), {0.5, 0.1, 0.02}, 60);
    CHECK(rep.tau == 1);
    CHECK(rep.passed);
    CHECK(rep.shift_required);
    CHECK(rep.cases.size() == 3);
  }
  SUBCASE("Dirichlet bounds pinch as t decreases") {
    // With tau = 1 the upper bound grows like 1/t through the near-constant mode.
    const auto rep = check_sandwich(square_problem(10, "halves:2,-1", BoundarySpec::dirichlet()), {0.5, 0.1, 0.02}, 20);
    REQUIRE(rep.passed);
    auto width = [](const SandwichCase& c) { return c.plus[0].upper - c.plus[0].lower; };
    CHECK(width(rep.cases[2]) < width(rep.cases[1]));
    CHECK(width(rep.cases[1]) < width(rep.cases[0]));
  }
  SUBCASE("argument checks") {
    const Problem pr = square_problem(6, "const:1", BoundarySpec::dirichlet());
    CHECK_THROWS_AS(check_sandwich(pr, {1.0}, 5), ModelingError);
    CHECK_THROWS_AS(check_sandwich(pr, {}, 5), ModelingError);
    CHECK_THROWS_AS(check_sandwich(pr, {0.1}, 0), ModelingError);
  }
}

} // TEST_SUITE
