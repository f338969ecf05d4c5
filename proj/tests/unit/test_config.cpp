#include "roughweyl/config.hpp"
#include "roughweyl/errors.hpp"
#include "roughweyl/runner.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace roughweyl;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is, "test.ini");
}

std::string message_of(const std::string& text) {
  try {
    (void)parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("roughweyl_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

int run_task(const std::string& task, const fs::path& cfg, const fs::path& out, std::string* err_text = nullptr) {
  RunOverrides ov;
  ov.out = out;
  std::ostringstream log, err;
  const int rc = run_experiment(task, cfg, ov, log, err);
  if (err_text) *err_text = err.str();
  return rc;
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("parse a full config") {
  const ExperimentConfig c = parse(R"(# experiment
task = weyl
[domain]
shape = disk
n = 3
level = 2
[metric]
spec = "graph_cone"
[weight]
spec = const:1
[boundary]
kind = dirichlet
[solver]
t = 0.5
k_each = 120
method = sparse
seed = 42
window = 20,60
partition = 2x2
t_list = 0.5, 0.25
k_max = 30
levels = 1,2
k_list = 1,4
[output]
dir = results
svg = false
)");
  CHECK(c.task == "weyl");
  CHECK(c.task_given);
  CHECK(c.shape == "disk");
  CHECK(c.n == 3);
  CHECK(c.level == 2);
  CHECK(c.metric == "graph_cone");
  CHECK(c.t == 0.5);
  CHECK(c.k_each == 120);
  CHECK(c.method == "sparse");
  CHECK(c.seed == 42);
  CHECK(c.window.lo == 20);
  CHECK(c.window.hi == 60);
  CHECK(c.partition_x == 2);
  CHECK(c.partition_y == 2);
  CHECK(c.t_list == std::vector<double>{0.5, 0.25});
  CHECK(c.levels == std::vector<int>{1, 2});
  CHECK(c.k_list == std::vector<int>{1, 4});
  CHECK(c.out_dir == "results");
  CHECK_FALSE(c.svg);
}

TEST_CASE("defaults are materialized") {
  ExperimentConfig c = parse("");
  CHECK_FALSE(c.task_given);
  c.resolve();
  CHECK(c.n == 2);
  CHECK(c.level == 5);
  CHECK(c.levels == std::vector<int>{3, 4, 5});
  const auto j = c.to_json();
  CHECK(j.at("domain").at("level") == 5);
  CHECK(j.at("solver").at("k_each") == "auto");
  CHECK(j.at("solver").at("window") == "auto");
  CHECK(j.at("metric").at("spec") == "euclidean");
  CHECK(j.at("solver").at("t_list").size() == 3);

  ExperimentConfig d = parse("[domain]\nshape = disk\n");
  d.resolve();
  CHECK(d.n == 4);
  CHECK(d.level == 3);
  const auto again = d.to_json();
  d.resolve();
  CHECK(d.to_json() == again);
}

TEST_CASE("invalid configs") {
  CHECK(message_of("metric = \"cone\"\n").find("metric") != std::string::npos);
  CHECK(message_of("[metric]\nspec = cone\n").find("[metric] spec") != std::string::npos);
  CHECK(message_of("[domain]\nsize = 3\n").find("unknown key [domain] size") != std::string::npos);
  CHECK(message_of("[nosuch]\n").find("unknown section") != std::string::npos);
  CHECK(message_of("[solver]\nt = 1\nt = 2\n").find("given twice") != std::string::npos);
  CHECK(message_of("[solver]\nt = abc\n").find("[solver] t") != std::string::npos);
  CHECK(!message_of("bogus = 1\n").empty());
  CHECK(!message_of("[domain\n").empty());
  CHECK(!message_of("[domain]\njust text\n").empty());
  CHECK(!message_of("task = dance\n").empty());
  CHECK(!message_of("[domain]\nshape = torus\n").empty());
  CHECK(!message_of("[solver]\nwindow = 5,40\n").empty());
  CHECK(!message_of("[solver]\nt_list = 0.5, 1.5\n").empty());
  CHECK(!message_of("[solver]\nquad_order = 3\n").empty());
  CHECK(!message_of("[boundary]\nkind = robin\n").empty());
  CHECK(!message_of("[weight]\nspec = expr:(x\n").empty());
  CHECK(!message_of("[output]\nsvg = maybe\n").empty());
  CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), ConfigError);
}

TEST_CASE("mesh building") {
  ExperimentConfig c = parse("[domain]\nn = 3\nlevel = 1\n");
  c.resolve();
  CHECK(build_mesh(c, 1).num_triangles() == 2 * 6 * 6);
  CHECK(build_mesh(c, 1).level == 1);
  ExperimentConfig d = parse("[domain]\nshape = disk\nn = 2\n");
  d.resolve();
  const Mesh m = build_mesh(d, 2);
  CHECK(m.level == 2);
  CHECK(m.num_vertices() == 1 + 3 * 8 * 9); // rings = 8
  ExperimentConfig odd = parse("[domain]\nn = 3\npattern = mirrored\n");
  CHECK_THROWS_AS(build_mesh(odd, 0), ConfigError);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit_codes");
  std::string err;
  CHECK(run_task("solve", write_file(dir / "bad.ini", "metric = \"cone\"\n"), dir / "o", &err) == 2);
  CHECK(err.find("metric") != std::string::npos);
  CHECK(run_task("solve", dir / "missing.ini", dir / "o") == 2);
  CHECK(run_task("weyl", write_file(dir / "task.ini", "task = solve\n"), dir / "o") == 2);
  CHECK(run_task("solve",
                 write_file(dir / "zero.ini", "[domain]\nn = 8\nlevel = 0\n[weight]\nspec = halves:1,-1\n"
                                              "[boundary]\nkind = neumann\n"),
                 dir / "o", &err) == 3);
  CHECK(err.find("modeling error") != std::string::npos);
  CHECK(run_task("solve",
                 write_file(dir / "cone.ini", "[domain]\nshape = disk\n[metric]\nspec = cone:alpha=4\n"), dir / "o") ==
        2);
  // A failing check is exit 1, with artifacts still written.
  CHECK(run_task("weyl", write_file(dir / "tight.ini", "[domain]\nlevel = 3\n[solver]\nweyl_tol = 1e-6\n"),
                 dir / "tight") == 1);
  CHECK(fs::exists(dir / "tight" / "summary.json"));
}

TEST_CASE("solve and weyl pipelines") {
  const fs::path dir = scratch("pipelines");
  const fs::path cfg = write_file(dir / "square.ini", "[domain]\nshape = square\n");
  REQUIRE(run_task("solve", cfg, dir / "solve") == 0);
  CHECK(count_lines(slurp(dir / "solve" / "spectrum.csv")) >= 201);
  CHECK(fs::exists(dir / "solve" / "counting.svg"));
  const auto s = nlohmann::json::parse(slurp(dir / "solve" / "summary.json"));
  CHECK(s.at("pass") == true);
  CHECK(s.at("config").at("domain").at("level") == 5);
  CHECK(s.at("version").get<std::string>().rfind("0.1.0", 0) == 0);

  REQUIRE(run_task("weyl", cfg, dir / "weyl") == 0);
  const auto w = nlohmann::json::parse(slurp(dir / "weyl" / "summary.json"));
  CHECK(std::abs(w.at("rel_dev_plus").get<double>()) < 0.10);
  CHECK(w.at("fits").at("minus").at("empty_side") == true);
}

TEST_CASE("other tasks run on small meshes") {
  const fs::path dir = scratch("tasks");
  const fs::path b = write_file(dir / "b.ini", "[domain]\nn = 8\nlevel = 0\n[weight]\nspec = halves:1,-1\n"
                                               "[solver]\npartition = 2x2\nk_max = 20\n");
  CHECK(run_task("bracket", b, dir / "b") == 0);
  CHECK(fs::exists(dir / "b" / "bracket.json"));
  const fs::path s = write_file(dir / "s.ini", "[domain]\nn = 8\nlevel = 0\n[boundary]\nkind = neumann\n"
                                               "[solver]\nk_max = 20\n");
  CHECK(run_task("sandwich", s, dir / "s") == 0);
  const auto sj = nlohmann::json::parse(slurp(dir / "s" / "summary.json"));
  CHECK(sj.at("sandwich").at("tau") == 1);
  const fs::path v = write_file(dir / "v.ini", "[domain]\nn = 8\nlevel = 0\n[solver]\ntrials = 10\nk_list = 1,3\n");
  CHECK(run_task("varprin", v, dir / "v") == 0);
  CHECK(nlohmann::json::parse(slurp(dir / "v" / "varprin.json")).size() == 6);
  const fs::path c = write_file(dir / "c.ini", "[domain]\nlevel = 4\n[solver]\nlevels = 3,4\n");
  CHECK(run_task("converge", c, dir / "c") == 0);
  CHECK(count_lines(slurp(dir / "c" / "convergence.csv")) == 3);
}

TEST_CASE("reruns are byte-identical") {
  const fs::path dir = scratch("determinism");
  const fs::path cfg = write_file(dir / "d.ini", "[domain]\nn = 4\nlevel = 3\n[weight]\nspec = checkerboard:n=2,a=1,b=-1\n"
                                                 "[solver]\nmethod = sparse\nk_each = 60\nseed = 9\n");
  REQUIRE(run_task("weyl", cfg, dir / "a") <= 1);
  REQUIRE(run_task("weyl", cfg, dir / "b") <= 1);
  for (const char* f : {"spectrum.csv", "summary.json", "counting.svg"}) {
    CAPTURE(f);
    const std::string a = slurp(dir / "a" / f);
    const std::string b = slurp(dir / "b" / f);
    CHECK_FALSE(a.empty());
    // The output directory is echoed in the summary; compare the rest.
    if (std::string(f) == "summary.json") {
      auto ja = nlohmann::json::parse(a), jb = nlohmann::json::parse(b);
      ja["config"]["output"].erase("dir");
      jb["config"]["output"].erase("dir");
      CHECK(ja.dump() == jb.dump());
    } else {
      CHECK(a == b);
    }
  }
}

} // TEST_SUITE
