#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fts/changepoint.hpp"
#include "fts/common.hpp"
#include "fts/cov_tests.hpp"
#include "fts/dgp.hpp"
#include "fts/harness.hpp"
#include "fts/io.hpp"
#include "fts/longrun.hpp"
#include "fts/mean_tests.hpp"
#include "fts/pivotal.hpp"
#include "fts/rng.hpp"
#include "fts/test_types.hpp"

namespace {

using nlohmann::json;

// Flag combinations CLI11 cannot express (exit code 2, like parse errors).
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fts::core::NuMeasure load_nu(std::size_t atoms, const std::string& file) {
  if (file.empty()) return fts::core::NuMeasure::uniform_atoms(atoms);
  std::ifstream in(file);
  if (!in) throw fts::data_error("cannot open nu file: " + file);
  json j;
  try {
    in >> j;
    return fts::core::NuMeasure(j.at("support").get<std::vector<double>>(),
                                j.at("weights").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw fts::data_error(file + ": " + e.what());
  }
}

json nu_json(const fts::core::NuMeasure& nu) {
  return {{"support", nu.support()}, {"weights", nu.weights()}};
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw fts::data_error("cannot open for writing: " + out_path);
  out << text;
  out.flush();
  if (!out) throw fts::data_error("write failed: " + out_path);
}

// ---- quantiles ----

struct QuantilesArgs {
  std::string dist = "W";
  std::size_t nu_atoms = 19;
  std::string nu_file;
  std::size_t reps = 100000;
  std::size_t bm_steps = 2000;
  std::uint64_t seed = 42;
  std::string cache_dir;
  std::vector<double> probs;
};

int run_quantiles(const QuantilesArgs& args) {
  const auto kind = fts::pivotal::pivot_kind_from_string(args.dist);
  const auto nu = load_nu(args.nu_atoms, args.nu_file);
  const auto probs = args.probs.empty() ? fts::pivotal::default_probabilities() : args.probs;
  const fts::pivotal::SimulationSettings settings{args.reps, args.bm_steps, args.seed};
  std::string notice;
  const auto table =
      fts::pivotal::ensure_table(args.cache_dir, kind, nu, probs, settings, &notice);
  if (!notice.empty()) std::cerr << notice << "\n";
  std::cout << "prob,quantile\n";
  for (const auto& [p, q] : table.table())
    std::cout << fmt17(p) << ',' << fmt17(q) << '\n';
  return 0;
}

// ---- test ----

struct TestArgs {
  std::string type;
  std::string x_path;
  std::string y_path;
  double delta = 0.0;
  double alpha = 0.05;
  std::string normalizer = "standard";
  std::size_t nu_atoms = 19;
  std::string nu_file;
  double trim = 0.05;
  std::optional<double> theta;
  std::size_t k_breaks = 1;
  std::vector<double> breaks;
  std::string cache_dir;
  std::size_t pivot_reps = 100000;
  std::size_t pivot_steps = 2000;
  std::uint64_t pivot_seed = 42;
  std::string out;
};

json outcome_json(const std::string& test, const fts::testing::TestOutcome& outcome,
                  const fts::testing::TestConfig& config) {
  json j;
  j["test"] = test;
  j["statistic"] = outcome.statistic;
  j["normalizer"] = outcome.normalizer;
  j["quantile"] = outcome.quantile_used;
  j["alpha"] = config.alpha();
  j["delta"] = config.delta();
  j["threshold"] = outcome.threshold;
  j["reject"] = outcome.reject;
  j["direction"] =
      outcome.direction == fts::testing::Direction::relevant ? "relevant" : "equivalence";
  j["normalizer_kind"] = fts::core::to_string(config.normalizer_kind());
  j["nu"] = nu_json(config.nu());
  return j;
}

int run_test(const TestArgs& args) {
  const auto x = fts::io::read_curves_csv_file(args.x_path);
  const auto kind = fts::core::normalizer_kind_from_string(args.normalizer);
  const auto nu = load_nu(args.nu_atoms, args.nu_file);

  auto probs = fts::pivotal::default_probabilities();
  probs.push_back(args.alpha);
  probs.push_back(1.0 - args.alpha);
  const fts::pivotal::SimulationSettings settings{args.pivot_reps, args.pivot_steps,
                                                  args.pivot_seed};
  std::string notice;
  const auto table = fts::pivotal::ensure_table(
      args.cache_dir, fts::pivotal::pivot_for(kind), nu, probs, settings, &notice);
  if (!notice.empty()) std::cerr << notice << "\n";

  const fts::testing::TestConfig config(args.delta, args.alpha, nu, kind, table);

  const auto need_y = [&]() -> fts::core::FunctionalSample {
    if (args.y_path.empty())
      throw usage_error("--y is required for the " + args.type + " test");
    return fts::io::read_curves_csv_file(args.y_path);
  };

  json j;
  if (args.type == "one-sample") {
    j = outcome_json(args.type, fts::meantest::one_sample_test(x, config), config);
  } else if (args.type == "one-sample-equivalence") {
    j = outcome_json(args.type, fts::meantest::one_sample_equivalence_test(x, config),
                     config);
  } else if (args.type == "two-sample") {
    const auto y = need_y();
    j = outcome_json(args.type, fts::meantest::two_sample_test(x, y, config), config);
  } else if (args.type == "changepoint") {
    const auto result = fts::cpoint::changepoint_test(x, config, args.trim, args.theta);
    j = outcome_json(args.type, result.outcome, config);
    j["theta_hat"] = result.fit.theta_hat;
    j["k_hat"] = result.fit.k_hat;
    j["trim"] = args.trim;
  } else if (args.type == "multi-cp") {
    fts::cpoint::MultiCpConfig multi;
    multi.k_breaks = args.k_breaks;
    multi.trim = args.trim;
    if (!args.breaks.empty()) multi.breaks = args.breaks;
    const auto result = fts::cpoint::multi_cp_l2_test(x, config, multi);
    j = outcome_json(args.type, result.outcome, config);
    j["thetas"] = result.thetas;
    j["k_breaks"] = multi.k_breaks;
    j["trim"] = args.trim;
  } else if (args.type == "cov-two-sample") {
    const auto y = need_y();
    j = outcome_json(args.type, fts::covtest::cov_two_sample_test(x, y, config), config);
  } else if (args.type == "cov-changepoint") {
    const auto result = fts::covtest::cov_changepoint_test(x, config, args.trim, args.theta);
    j = outcome_json(args.type, result.outcome, config);
    j["theta_hat"] = result.fit.theta_hat;
    j["k_hat"] = result.fit.k_hat;
    j["trim"] = args.trim;
  } else {
    throw usage_error("unknown test type: " + args.type);
  }
  emit(j.dump(2) + "\n", args.out);
  return 0;
}

// ---- ingest ----

struct IngestArgs {
  std::string in_path;
  std::string out;
  std::string mode = "project";
  std::size_t basis_dim = 49;
  std::size_t resolution = 100;
};

int run_ingest(const IngestArgs& args) {
  std::ifstream in(args.in_path);
  if (!in) throw fts::data_error("cannot open: " + args.in_path);
  fts::core::FunctionalSample sample = [&] {
    if (args.mode == "project")
      return fts::io::ingest_project(in, args.in_path, args.basis_dim, args.resolution);
    if (args.mode == "pivot") return fts::io::read_curves_csv(in, args.in_path);
    throw usage_error("unknown ingest mode: " + args.mode);
  }();
  std::ostringstream text;
  fts::io::write_curves_csv(text, sample);
  emit(text.str(), args.out);
  return 0;
}

// ---- simulate ----

struct SimulateArgs {
  std::string dgp = "iid_basis";
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t resolution = 100;
  std::string basis = "bspline";
  std::size_t dim = 21;
  std::string sigma = "inv_i_sq";
  double kappa = 0.0;
  std::string mean_kind = "zero";
  double mean_param = 0.0;
  double error_scale = 1.0;
  std::size_t m = 0;   // cov_scenario: size of the first sample
  double a = 1.0;      // cov_scenario: scale of the second sample
  std::string out;
  std::string out_y;
};

fts::dgp::Variant variant_from_string(const std::string& name) {
  using fts::dgp::Variant;
  if (name == "iid_basis") return Variant::iid_basis;
  if (name == "fma1") return Variant::fma1;
  if (name == "far1") return Variant::far1;
  if (name == "brownian_bridge") return Variant::brownian_bridge;
  if (name == "heavy_t5_basis") return Variant::heavy_t5_basis;
  if (name == "kraus_t5") return Variant::kraus_t5;
  if (name == "cov_scenario") return Variant::cov_scenario;
  throw usage_error("unknown dgp variant: " + name);
}

json spec_json(const SimulateArgs& args) {
  json j;
  j["variant"] = args.dgp;
  j["n"] = args.n;
  j["seed"] = args.seed;
  j["grid_resolution"] = args.resolution;
  j["basis"] = {{"family", args.basis}, {"dimension", args.dim}};
  j["sigma_profile"] = args.sigma;
  j["kappa"] = args.kappa;
  j["mean"] = {{"kind", args.mean_kind}, {"param", args.mean_param}};
  j["error_scale"] = args.error_scale;
  j["rng_algorithm"] = fts::rng::kAlgorithm;
  if (args.dgp == "cov_scenario") {
    j["m"] = args.m;
    j["a"] = args.a;
  }
  return j;
}

int run_simulate(const SimulateArgs& args) {
  fts::dgp::DgpSpec spec;
  spec.variant = variant_from_string(args.dgp);
  spec.n = args.n;
  spec.seed = args.seed;
  spec.grid_resolution = args.resolution;
  spec.basis.family = args.basis == "fourier" ? fts::basis::Family::fourier
                                              : fts::basis::Family::bspline;
  if (args.basis != "fourier" && args.basis != "bspline")
    throw usage_error("unknown basis family: " + args.basis);
  spec.basis.dimension = args.dim;
  if (args.sigma == "inv_i_sq")
    spec.sigma = fts::dgp::SigmaProfile::inv_i_sq;
  else if (args.sigma == "geometric")
    spec.sigma = fts::dgp::SigmaProfile::geometric;
  else
    throw usage_error("unknown sigma profile: " + args.sigma);
  spec.kappa = args.kappa;
  spec.error_scale = args.error_scale;
  if (args.mean_kind == "zero")
    spec.mean = {fts::dgp::MeanKind::zero, 0.0};
  else if (args.mean_kind == "sin")
    spec.mean = {fts::dgp::MeanKind::sin_bump, args.mean_param};
  else if (args.mean_kind == "parabola")
    spec.mean = {fts::dgp::MeanKind::parabola, args.mean_param};
  else
    throw usage_error("unknown mean kind: " + args.mean_kind);

  if (spec.variant == fts::dgp::Variant::cov_scenario) {
    if (args.m == 0) throw usage_error("cov_scenario needs --m (first sample size)");
    if (args.out_y.empty()) throw usage_error("cov_scenario needs --out-y");
    const auto [x, y] = fts::dgp::simulate_cov_pair(spec, args.m, args.n, args.a);
    std::ostringstream tx, ty;
    fts::io::write_curves_csv(tx, x);
    fts::io::write_curves_csv(ty, y);
    emit(tx.str(), args.out);
    emit(ty.str(), args.out_y);
  } else {
    const auto x = fts::dgp::simulate(spec);
    std::ostringstream text;
    fts::io::write_curves_csv(text, x);
    emit(text.str(), args.out);
  }
  if (!args.out.empty()) emit(spec_json(args).dump(2) + "\n", args.out + ".json");
  return 0;
}

// ---- experiment ----

struct ExperimentArgs {
  std::string scenario;
  std::vector<double> sweep;
  std::vector<double> alphas;
  std::size_t reps = 1000;
  bool ci = false;
  std::uint64_t seed = 42;
  std::size_t n = 0;
  std::size_t m = 0;
  double delta = 0.0;
  double trim = 0.05;
  std::string cache_dir;
  std::size_t pivot_reps = 100000;
  std::size_t pivot_steps = 2000;
  std::uint64_t pivot_seed = 42;
  std::string out;
  std::string manifest;
  std::string compare;
  bool list = false;
};

int run_experiment_cmd(const ExperimentArgs& args) {
  if (args.list) {
    for (const auto& info : fts::harness::list_scenarios())
      std::cout << info.name << "  " << info.summary << "\n";
    return 0;
  }
  if (args.scenario.empty()) throw usage_error("--scenario is required (or use --list)");
  fts::harness::ExperimentSpec spec;
  spec.scenario = args.scenario;
  spec.sweep = args.sweep;
  spec.alphas = args.alphas;
  spec.replications = args.reps;
  spec.ci_mode = args.ci;
  spec.master_seed = args.seed;
  spec.n = args.n;
  spec.m = args.m;
  spec.delta = args.delta;
  spec.trim = args.trim;
  spec.cache_dir = args.cache_dir;
  spec.pivot_sim = {args.pivot_reps, args.pivot_steps, args.pivot_seed};

  const auto table = [&] {
    if (args.compare.empty()) return fts::harness::run_experiment(spec);
    if (args.compare == "normalizers") return fts::harness::compare_normalizers(spec);
    if (args.compare == "lrv") return fts::harness::compare_lrv(spec);
    throw usage_error("unknown comparison: " + args.compare);
  }();
  emit(table.to_csv(), args.out);
  const std::string manifest_path =
      !args.manifest.empty() ? args.manifest
                             : (args.out.empty() ? "" : args.out + ".manifest.json");
  if (!manifest_path.empty())
    emit(fts::harness::manifest_json(spec) + "\n", manifest_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-normalized tests of relevant hypotheses for functional time series"};
  app.require_subcommand(1);

  QuantilesArgs qa;
  auto* quantiles = app.add_subcommand("quantiles", "Simulate or load pivotal quantile tables");
  quantiles->add_option("--dist", qa.dist, "Pivot law: W, Wstar or Wstarstar");
  quantiles->add_option("--nu-atoms", qa.nu_atoms, "Uniform nu on {i/(k+1) : i=1..k}");
  quantiles->add_option("--nu-file", qa.nu_file, "JSON file with nu support and weights");
  quantiles->add_option("--reps", qa.reps, "Monte Carlo replications");
  quantiles->add_option("--bm-steps", qa.bm_steps, "Brownian path steps");
  quantiles->add_option("--seed", qa.seed, "Simulation seed");
  quantiles->add_option("--cache-dir", qa.cache_dir, "Quantile cache directory");
  quantiles->add_option("--probs", qa.probs, "Probabilities to tabulate")->delimiter(',');

  TestArgs ta;
  auto* test = app.add_subcommand("test", "Run a relevant-hypothesis test on curve CSV data");
  test->add_option("--type", ta.type,
                   "one-sample, one-sample-equivalence, two-sample, changepoint, "
                   "multi-cp, cov-two-sample or cov-changepoint")
      ->required();
  test->add_option("--x", ta.x_path, "Curve CSV (first or only sample)")->required();
  test->add_option("--y", ta.y_path, "Curve CSV (second sample)");
  test->add_option("--delta", ta.delta, "Relevance margin (must be positive)")->required();
  test->add_option("--alpha", ta.alpha, "Test level");
  test->add_option("--normalizer", ta.normalizer, "standard, sup or abs");
  test->add_option("--nu-atoms", ta.nu_atoms, "Uniform nu on {i/(k+1) : i=1..k}");
  test->add_option("--nu-file", ta.nu_file, "JSON file with nu support and weights");
  test->add_option("--trim", ta.trim, "Change point trimming fraction");
  double theta_flag = -1.0;
  auto* theta_opt = test->add_option("--theta", theta_flag, "Fixed split fraction");
  test->add_option("--k-breaks", ta.k_breaks, "Break count for multi-cp");
  test->add_option("--breaks", ta.breaks, "Fixed break fractions for multi-cp")
      ->delimiter(',');
  test->add_option("--cache-dir", ta.cache_dir, "Quantile cache directory");
  test->add_option("--pivot-reps", ta.pivot_reps, "Pivot simulation replications");
  test->add_option("--pivot-steps", ta.pivot_steps, "Pivot Brownian path steps");
  test->add_option("--pivot-seed", ta.pivot_seed, "Pivot simulation seed");
  test->add_option("--out", ta.out, "Write the result JSON here instead of stdout");

  IngestArgs ia;
  auto* ingest = app.add_subcommand("ingest", "Convert raw CSV data to canonical curve CSV");
  ingest->add_option("--in", ia.in_path, "Input CSV")->required();
  ingest->add_option("--out", ia.out, "Output curve CSV (default stdout)");
  ingest->add_option("--mode", ia.mode,
                     "project (least-squares Fourier smoothing) or pivot (long to wide)");
  ingest->add_option("--basis-dim", ia.basis_dim, "Fourier functions for projection");
  ingest->add_option("--resolution", ia.resolution, "Output grid resolution");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Draw a sample from a built-in process");
  simulate->add_option("--dgp", sa.dgp,
                       "iid_basis, fma1, far1, brownian_bridge, heavy_t5_basis, "
                       "kraus_t5 or cov_scenario");
  simulate->add_option("--n", sa.n, "Sample size")->required();
  simulate->add_option("--seed", sa.seed, "Seed");
  simulate->add_option("--resolution", sa.resolution, "Grid resolution");
  simulate->add_option("--basis", sa.basis, "bspline or fourier");
  simulate->add_option("--dim", sa.dim, "Basis dimension");
  simulate->add_option("--sigma", sa.sigma, "inv_i_sq or geometric");
  simulate->add_option("--kappa", sa.kappa, "MA/AR coefficient");
  simulate->add_option("--mean-kind", sa.mean_kind, "zero, sin or parabola");
  simulate->add_option("--mean-param", sa.mean_param, "Mean parameter");
  simulate->add_option("--error-scale", sa.error_scale, "Multiplier on the error curves");
  simulate->add_option("--m", sa.m, "cov_scenario: first sample size");
  simulate->add_option("--a", sa.a, "cov_scenario: scale of the second sample");
  simulate->add_option("--out", sa.out, "Output curve CSV (default stdout, no sidecar)");
  simulate->add_option("--out-y", sa.out_y, "cov_scenario: second sample output");

  ExperimentArgs ea;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo study");
  experiment->add_option("--scenario", ea.scenario, "Scenario name (see --list)");
  experiment->add_option("--sweep", ea.sweep, "Sweep values")->delimiter(',');
  experiment->add_option("--alphas", ea.alphas, "Test levels")->delimiter(',');
  experiment->add_option("--reps", ea.reps, "Replications per sweep point");
  experiment->add_flag("--ci", ea.ci, "Cap replications at 300");
  experiment->add_option("--seed", ea.seed, "Master seed");
  experiment->add_option("--n", ea.n, "Primary sample size override");
  experiment->add_option("--m", ea.m, "Secondary sample size override");
  experiment->add_option("--delta", ea.delta, "Relevance margin override");
  experiment->add_option("--trim", ea.trim, "Change point trimming fraction");
  experiment->add_option("--cache-dir", ea.cache_dir, "Quantile cache directory");
  experiment->add_option("--pivot-reps", ea.pivot_reps, "Pivot simulation replications");
  experiment->add_option("--pivot-steps", ea.pivot_steps, "Pivot Brownian path steps");
  experiment->add_option("--pivot-seed", ea.pivot_seed, "Pivot simulation seed");
  experiment->add_option("--out", ea.out, "Output CSV (default stdout)");
  experiment->add_option("--manifest", ea.manifest, "Manifest JSON path");
  experiment->add_option("--compare", ea.compare, "normalizers or lrv");
  experiment->add_flag("--list", ea.list, "List scenarios and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*quantiles) return run_quantiles(qa);
    if (*test) {
      if (theta_opt->count() > 0) ta.theta = theta_flag;
      return run_test(ta);
    }
    if (*ingest) return run_ingest(ia);
    if (*simulate) return run_simulate(sa);
    if (*experiment) return run_experiment_cmd(ea);
    return 2;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const fts::data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const fts::precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
