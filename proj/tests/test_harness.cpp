#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "fts/common.hpp"
#include "fts/harness.hpp"
#include "fts/rng.hpp"

using namespace fts;
using harness::ExperimentSpec;

namespace {

// Coarse pivot simulation: the quantiles only need to exist, unit tests
// do not probe their accuracy.
ExperimentSpec tiny_spec(const std::string& scenario) {
  static const std::string cache = [] {
    std::filesystem::remove_all("unit_scratch/harness_cache");
    std::filesystem::create_directories("unit_scratch/harness_cache");
    return std::string("unit_scratch/harness_cache");
  }();
  ExperimentSpec spec;
  spec.scenario = scenario;
  spec.replications = 100;
  spec.grid_resolution = 50;
  spec.cache_dir = cache;
  spec.pivot_sim = {2000, 200, 42};
  return spec;
}

bool has_method(const harness::RejectionTable& table, const std::string& method) {
  return std::any_of(table.rows.begin(), table.rows.end(),
                     [&](const harness::RateRow& r) { return r.method == method; });
}

}  // namespace

TEST_CASE("scenario registry lists every named study") {
  const auto& infos = harness::list_scenarios();
  CHECK(infos.size() >= 20);
  for (const char* name :
       {"fig1_iid", "fig2_lrv_comparison", "fig3_two_sample_fma1", "fig4_normalizers_fma",
        "fig5_cp_iid", "fig7_cov2s_A", "fig8_covcp_A", "tableA1_cov_iid_B"}) {
    const bool found = std::any_of(infos.begin(), infos.end(),
                                   [&](const auto& info) { return info.name == name; });
    CHECK_MESSAGE(found, name);
  }
}

TEST_CASE("experiments replay bit-identically and resolve aliases") {
  auto spec = tiny_spec("fig1");  // alias of fig1_iid
  spec.n = 50;
  spec.sweep = {0.02};
  const auto a = harness::run_experiment(spec);
  const auto b = harness::run_experiment(spec);
  CHECK(a.to_csv() == b.to_csv());
  REQUIRE_FALSE(a.rows.empty());
  for (const auto& row : a.rows) {
    CHECK(row.scenario == "fig1_iid");  // canonical name, not the alias
    CHECK(row.param == 0.02);
    CHECK(row.n == 50);
    CHECK(row.alpha == 0.05);
    CHECK(row.replications == 100);
    CHECK(row.std_error ==
          doctest::Approx(std::sqrt(row.rate * (1.0 - row.rate) / 100.0)).epsilon(1e-15));
  }
  const std::string csv = a.to_csv();
  CHECK(csv.rfind("scenario,param,method,alpha,n,m,rate,std_error,replications\n", 0) == 0);

  auto reseeded = spec;
  reseeded.master_seed = 43;
  CHECK(harness::run_experiment(reseeded).to_csv() != a.to_csv());
}

TEST_CASE("experiment validation refuses unusable configurations") {
  CHECK_THROWS_AS(harness::run_experiment(tiny_spec("nonsense")), precondition_error);
  auto few = tiny_spec("fig1_iid");
  few.n = 50;
  few.sweep = {0.02};
  few.replications = 99;
  CHECK_THROWS_AS(harness::run_experiment(few), precondition_error);
  auto bad_alpha = tiny_spec("fig1_iid");
  bad_alpha.n = 50;
  bad_alpha.sweep = {0.02};
  bad_alpha.alphas = {1.5};
  CHECK_THROWS_AS(harness::run_experiment(bad_alpha), precondition_error);
}

TEST_CASE("ci mode caps the replication count at 300") {
  auto spec = tiny_spec("fig1_iid");
  spec.n = 50;
  spec.sweep = {0.02};
  spec.replications = 1000;
  spec.ci_mode = true;
  const auto table = harness::run_experiment(spec);
  REQUIRE_FALSE(table.rows.empty());
  for (const auto& row : table.rows) CHECK(row.replications == 300);
}

TEST_CASE("normalizer comparison emits one column per normalizer") {
  auto spec = tiny_spec("fig4_normalizers_fma");
  spec.sweep = {0.2};
  const auto table = harness::compare_normalizers(spec);
  CHECK(has_method(table, "standard"));
  CHECK(has_method(table, "sup"));
  CHECK(has_method(table, "abs"));
  CHECK(table.rows.size() == 3);  // one sweep point, one alpha, three methods

  CHECK_THROWS_AS(harness::compare_normalizers(tiny_spec("fig1_iid")), precondition_error);
}

TEST_CASE("variance-estimator comparison emits the three benchmark columns") {
  auto spec = tiny_spec("fig2_lrv_comparison");
  spec.sweep = {0.8};
  const auto table = harness::compare_lrv(spec);
  CHECK(has_method(table, "self_norm"));
  CHECK(has_method(table, "lrv_plugin"));
  CHECK(has_method(table, "lrv_true"));
  CHECK(table.rows.size() == 3);

  CHECK_THROWS_AS(harness::compare_lrv(tiny_spec("fig4_normalizers_fma")),
                  precondition_error);
}

TEST_CASE("alphas resolve to the scenario defaults and can be overridden") {
  auto spec = tiny_spec("tableA1_cov_iid_B");
  spec.replications = 100;
  const auto table = harness::run_experiment(spec);
  // Default sweep {1.5} and alphas {0.01, 0.05, 0.10}.
  CHECK(table.rows.size() == 3);
  for (double a : {0.01, 0.05, 0.10}) {
    const bool found = std::any_of(table.rows.begin(), table.rows.end(),
                                   [&](const auto& row) { return row.alpha == a; });
    CHECK(found);
  }
}

TEST_CASE("manifest records the resolved configuration") {
  auto spec = tiny_spec("fig1_iid");
  spec.n = 50;
  spec.sweep = {0.01, 0.02};
  const auto parsed = nlohmann::json::parse(harness::manifest_json(spec));
  CHECK(parsed.at("scenario") == "fig1_iid");
  CHECK(parsed.at("master_seed") == 42);
  CHECK(parsed.at("n") == 50);
  CHECK(parsed.at("sweep").size() == 2);
  CHECK(parsed.at("delta") == 0.02);  // scenario default fills the gap
  CHECK(parsed.at("rng_algorithm") == rng::kAlgorithm);
  CHECK(parsed.at("nu").at("support").size() == 19);
  CHECK(parsed.at("cache_dir") == "unit_scratch/harness_cache");
  CHECK(parsed.at("pivot_sim").at("replications") == 2000);
}
