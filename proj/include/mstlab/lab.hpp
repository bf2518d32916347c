#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mstlab/graph_process.hpp"

// Experiment harness: a catalogue of named, reproducible experiments,
// each validating one quantitative prediction at desk scale. Runs are
// driven by an ExperimentSpec and produce a RunManifest plus CSV rows;
// identical specs reproduce identical statistics regardless of the
// thread count.

namespace mstlab {

struct ExperimentSpec {
  std::string name;
  std::map<std::string, double> params;  // overrides of the defaults
  std::uint64_t seed = 20240601;
  std::string out_dir;  // empty: nothing written
  int threads = 0;      // 0: LAB_THREADS env or hardware concurrency
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  std::string detail;
};

struct CsvRow {
  int replica;
  std::string statistic;
  double value;
};

struct RunManifest {
  ExperimentSpec spec;  // effective spec, defaults applied
  std::string started_at;
  std::string finished_at;
  std::vector<std::uint64_t> replica_seeds;
  std::map<std::string, double> summary;
  std::vector<CheckResult> checks;

  bool all_passed() const;
  std::string to_json() const;
};

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::map<std::string, double> defaults;
};

const std::vector<ExperimentInfo>& experiment_catalogue();

// Runs the named experiment; writes results.csv and manifest.json under
// spec.out_dir when set. Throws on unknown names or bad parameters.
RunManifest run_experiment(const ExperimentSpec& spec);

// Uniform spanning tree of K_n by the random-walk (first-entry) sampler.
Forest aldous_broder_ust(int n, std::uint64_t seed);

// key = value lines, '#' comments; numeric values only.
std::map<std::string, double> parse_config(const std::string& text);

int default_threads();

}  // namespace mstlab
