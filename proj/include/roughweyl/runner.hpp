#pragma once

#include "roughweyl/config.hpp"
#include "roughweyl/problem.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace roughweyl {

// Mesh of the configured domain at a refinement level.
Mesh build_mesh(const ExperimentConfig& cfg, int level);
Problem build_problem(const ExperimentConfig& cfg, int level);

struct RunResult {
  bool passed = false;
  nlohmann::json summary;
};

// Runs cfg.task and writes its artifacts to cfg.out_dir. Failures of the
// input or the numerics propagate as ConfigError, ModelingError/MeshError
// or SolverError; failing checks only clear `passed`.
RunResult run(const ExperimentConfig& cfg, std::ostream& log);

struct RunOverrides {
  std::optional<std::filesystem::path> out;
  std::optional<int> level;
  std::optional<std::uint64_t> seed;
};

// Loads the config, applies the overrides and runs `task`. Returns the
// process exit status: 0 all checks pass, 1 some check failed, 2 config
// error, 3 modeling error, 4 solver failure.
int run_experiment(const std::string& task, const std::filesystem::path& config, const RunOverrides& overrides,
                   std::ostream& log, std::ostream& err);

} // namespace roughweyl
