#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fts/pivotal.hpp"

namespace fts::harness {

// A named simulation study. Fields left at their zero values fall back
// to the scenario's defaults (resolved copies end up in the manifest).
struct ExperimentSpec {
  std::string scenario;
  std::vector<double> sweep;           // scenario-specific axis (a, delta, kappa, ...)
  std::vector<double> alphas;          // default {0.05}
  std::size_t replications = 1000;     // CI mode drops this to 300
  bool ci_mode = false;
  std::uint64_t master_seed = 42;
  std::size_t grid_resolution = 100;
  std::size_t n = 0;                   // primary sample size
  std::size_t m = 0;                   // secondary sample size (two-sample)
  double delta = 0.0;                  // relevance margin; <= 0 -> default
  double trim = 0.05;
  std::string cache_dir;               // quantile cache ("" -> default)
  pivotal::SimulationSettings pivot_sim;
};

struct RateRow {
  std::string scenario;
  double param = 0.0;
  std::string method;
  double alpha = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  double rate = 0.0;
  double std_error = 0.0;  // sqrt(r (1 - r) / reps)
  std::size_t replications = 0;
};

struct RejectionTable {
  std::vector<RateRow> rows;
  std::string to_csv() const;
};

struct ScenarioInfo {
  std::string name;
  std::string summary;
};

const std::vector<ScenarioInfo>& list_scenarios();

// Runs one scenario. Replications use seeds derived from (master_seed,
// scenario, sweep index, replication index), so results are independent
// of the execution schedule; rates for every alpha reuse the same
// replications.
RejectionTable run_experiment(const ExperimentSpec& spec);

// Normalizer bake-off (standard / sup / abs on shared samples). Valid
// for the two-sample comparison scenarios.
RejectionTable compare_normalizers(const ExperimentSpec& spec);

// Self-normalized vs plug-in long-run-variance vs known-variance tests
// on shared samples. Valid for the AR-errors comparison scenarios.
RejectionTable compare_lrv(const ExperimentSpec& spec);

// Reproducibility manifest: resolved configuration, seed, rng algorithm.
std::string manifest_json(const ExperimentSpec& spec);

}  // namespace fts::harness
