#include <iostream>

#include <CLI11.hpp>

#include "experiment.hpp"

int main(int argc, char** argv) {
  using namespace gnk::cli;
  CLI::App app{"Boundary integral solvers with the generalized Neumann kernel"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 0;
  std::uint64_t seed = 0;
  const std::pair<const char*, ProblemKind> commands[] = {
      {"solve", ProblemKind::Gnk},         {"adjoint", ProblemKind::Adjoint},
      {"cauchy", ProblemKind::Cauchy},     {"bench", ProblemKind::Benchmark},
      {"geometry", ProblemKind::Geometry},
  };
  const char* help[] = {"Solve (I - N) mu = -M gamma over an n sweep",
                        "Solve the adjoint system and report E_n",
                        "Evaluate the Cauchy integral at interior targets",
                        "Time fast against direct Cauchy sums",
                        "Write the boundary nodes of the first n"};
  std::vector<CLI::App*> subs;
  for (std::size_t k = 0; k < std::size(commands); ++k) {
    auto* sub = app.add_subcommand(commands[k].first, help[k]);
    sub->add_option("--config", config_path, "Experiment config file")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides 'out')");
    sub->add_option("--threads", threads, "Worker threads for sweep cells")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Seed for benchmark point clouds");
    subs.push_back(sub);
  }
  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig config = load_config(config_path);
    for (std::size_t k = 0; k < subs.size(); ++k)
      if (subs[k]->parsed()) config.problem = commands[k].second;
    if (!out_dir.empty()) config.out = out_dir;
    if (threads > 0) config.threads = threads;
    for (auto* sub : subs)
      if (sub->parsed() && sub->count("--seed")) config.seed = seed;
    const RunResult r = run_experiment(config, std::cerr);
    (r.exit_code == 0 ? std::cout : std::cerr) << r.message << "\n";
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
