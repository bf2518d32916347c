#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mstlab/lab.hpp"

namespace {

int cmd_list() {
  for (const auto& info : mstlab::experiment_catalogue()) {
    std::cout << info.name << "\n    " << info.description << "\n    defaults:";
    for (const auto& [key, value] : info.defaults) std::cout << ' ' << key << '=' << value;
    std::cout << "\n";
  }
  return 0;
}

int cmd_run(const std::string& name, const std::string& config_path,
            std::uint64_t seed, long long replicas, const std::string& out_dir,
            int threads) {
  mstlab::ExperimentSpec spec;
  spec.name = name;
  spec.seed = seed;
  spec.out_dir = out_dir;
  spec.threads = threads;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot open config file: " << config_path << "\n";
      return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    spec.params = mstlab::parse_config(buf.str());
  }
  if (replicas > 0) spec.params["replicas"] = static_cast<double>(replicas);

  mstlab::RunManifest manifest;
  try {
    manifest = mstlab::run_experiment(spec);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }

  for (const auto& check : manifest.checks)
    std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << ": "
              << check.detail << "\n";
  for (const auto& [key, value] : manifest.summary)
    std::cout << "  " << key << " = " << value << "\n";
  if (!out_dir.empty())
    std::cout << "wrote " << out_dir << "/results.csv and manifest.json\n";
  return manifest.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation laboratory for minimum spanning trees of the "
               "complete graph and their scaling limits"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "enumerate the experiment catalogue");

  std::string name, config_path, out_dir;
  std::uint64_t seed = 20240601;
  long long replicas = 0;
  int threads = 0;
  auto* run = app.add_subcommand("run", "run one experiment");
  run->add_option("experiment", name, "experiment name (see `lab list`)")->required();
  run->add_option("--config", config_path, "key = value parameter file");
  run->add_option("--seed", seed, "master seed");
  run->add_option("--replicas", replicas, "override the replicas parameter");
  run->add_option("--out", out_dir, "output directory for results.csv/manifest.json");
  run->add_option("--threads", threads, "worker threads (default: LAB_THREADS or all cores)");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) return cmd_list();
  return cmd_run(name, config_path, seed, replicas, out_dir, threads);
}
