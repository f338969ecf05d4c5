#pragma once

#include "roughweyl/weyl.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace roughweyl {

// Experiment description read from an INI-style file:
//
//   # comment
//   [domain]
//   shape = square        # square | disk
//   n = 2                 # square: cells per side at level 0; disk: rings at level 0
//   level = 5             # square: uniform refinements; disk: rings = n * 2^level
//   pattern = uniform     # square diagonals: uniform | mirrored
//   [metric]
//   spec = euclidean
//   [weight]
//   spec = const:1
//   [boundary]
//   kind = dirichlet
//   [solver]
//   ...
//   [output]
//   dir = out
//
// Values may be double-quoted. Keys outside the known set are rejected.
// The shorthand keys metric, weight, boundary and task are also accepted
// before the first section header.
struct ExperimentConfig {
  std::string task = "solve";
  bool task_given = false; // set when the file names a task

  std::string shape = "square";
  int n = 0;      // 0: 2 for the square, 4 for the disk
  int level = -1; // -1: 5 for the square, 3 for the disk
  std::string pattern = "uniform";

  std::string metric = "euclidean";
  std::string weight = "const:1";
  std::string boundary = "dirichlet";

  double t = 0.0;
  int k_each = 0; // 0: chosen from the task and working dimension
  std::string method = "auto";
  std::uint64_t seed = 1;
  Window window;
  int partition_x = 2;
  int partition_y = 1;
  std::vector<double> t_list = {0.5, 0.1, 0.02};
  int k_max = 50;
  int trials = 100;
  std::vector<int> levels; // empty: level-2 .. level
  std::vector<int> k_list = {1, 2, 3, 5, 10};
  double weyl_tol = 0.10;
  int quad_order = 2;
  bool vectors = false;
  int dense_limit = 3000;
  int block = 4;

  std::string out_dir = "out";
  bool svg = true;

  std::string source; // file name used in messages

  // Fills the shape-dependent defaults; idempotent.
  void resolve();

  // Every setting with defaults materialized.
  nlohmann::json to_json() const;
};

ExperimentConfig parse_config(std::istream& is, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

} // namespace roughweyl
