// Command-line front end: one subcommand per experiment kind.

#include "roughweyl/runner.hpp"
#include "roughweyl/version.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Weighted eigenvalue experiments on rough Riemannian surfaces", "roughweyl"};
  app.set_version_flag("--version", roughweyl::kVersion);
  app.require_subcommand(1);

  struct Args {
    std::string config;
    std::string out;
    int level = -1;
    std::uint64_t seed = 0;
  };
  Args args;
  std::string chosen;

  const std::pair<const char*, const char*> tasks[] = {
      {"solve", "compute the weighted spectrum on both sides"},
      {"weyl", "solve and compare the eigenvalue growth with the Weyl constant"},
      {"bracket", "check Dirichlet-Neumann bracketing over a partition"},
      {"sandwich", "check the shifted pencil bounds for a list of shifts"},
      {"varprin", "sample the variational characterizations"},
      {"converge", "fit the Weyl constant across refinement levels"},
  };
  for (const auto& [name, help] : tasks) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "experiment file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "output directory (overrides the file)");
    sub->add_option("--level", args.level, "refinement level (overrides the file)");
    sub->add_option("--seed", args.seed, "random seed (overrides the file)");
    sub->callback([&chosen, n = std::string(name)] { chosen = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  roughweyl::RunOverrides ov;
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--out")) ov.out = args.out;
    if (sub->count("--level")) ov.level = args.level;
    if (sub->count("--seed")) ov.seed = args.seed;
  }
  return roughweyl::run_experiment(chosen, args.config, ov, std::cout, std::cerr);
}
