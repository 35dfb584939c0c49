#include "fts/harness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <map>
#include <stdexcept>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "fts/changepoint.hpp"
#include "fts/common.hpp"
#include "fts/cov_tests.hpp"
#include "fts/dgp.hpp"
#include "fts/longrun.hpp"
#include "fts/mean_tests.hpp"
#include "fts/rng.hpp"

namespace fts::harness {

namespace {

using core::NormalizerKind;
using core::NuMeasure;

// All studies integrate the self-normalizer against the uniform measure
// on {i/20}. Its smallest atom equals the covariance-test support floor.
const NuMeasure& harness_nu() {
  static const NuMeasure nu = NuMeasure::uniform_atoms(19);
  return nu;
}

// Critical-value family of one method column: a pivot law for the
// self-normalized tests, the Gaussian quantile for the variance-based
// benchmarks.
enum class Crit : std::size_t { pivot_w = 0, pivot_wstar = 1, pivot_wstarstar = 2, gaussian = 3 };

struct MethodDraw {
  const char* method;
  Crit crit;
  double statistic;
  double scale;  // threshold = delta + crit_value * scale
};

struct Resolved {
  std::string scenario;
  std::vector<double> sweep;
  std::vector<double> alphas;
  std::size_t replications = 0;
  std::uint64_t master_seed = 0;
  std::size_t grid_resolution = 100;
  std::size_t n = 0;
  std::size_t m = 0;
  double delta = 0.0;
  double trim = 0.05;
  std::string cache_dir;
  pivotal::SimulationSettings pivot_sim;
};

using Runner = void (*)(const Resolved&, double param, std::uint64_t seed,
                        std::vector<MethodDraw>& out);

enum class Kind { plain, normalizer_comparison, lrv_comparison };

struct Defaults {
  std::size_t n = 0;
  std::size_t m = 0;
  double delta = 0.0;
  std::vector<double> sweep;
  std::vector<double> alphas{0.05};
};

struct ScenarioDef {
  std::string name;
  std::string summary;
  Defaults defaults;
  Runner runner;
  Kind kind = Kind::plain;
  std::vector<Crit> crits{Crit::pivot_w};
};

dgp::DgpSpec error_spec(dgp::Variant variant, basis::Family family, std::size_t n,
                        std::uint64_t seed, std::size_t resolution) {
  dgp::DgpSpec spec;
  spec.variant = variant;
  spec.n = n;
  spec.seed = seed;
  spec.grid_resolution = resolution;
  spec.basis = {family, 21};
  return spec;
}

// ---- one-sample mean, sweep over the squared mean norm ----

void run_one_sample(dgp::Variant variant, const Resolved& r, double param,
                    std::uint64_t seed, std::vector<MethodDraw>& out) {
  auto spec = error_spec(variant, basis::Family::bspline, r.n, seed, r.grid_resolution);
  spec.mean = {dgp::MeanKind::sin_bump, param};
  const auto x = dgp::simulate(spec);
  const double stat = meantest::one_sample_statistic(x);
  const double v = meantest::one_sample_normalizer(x, harness_nu(), NormalizerKind::standard);
  out.push_back({"self_norm", Crit::pivot_w, stat, v});
}

void run_fig1_iid(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_one_sample(dgp::Variant::iid_basis, r, p, s, o);
}
void run_fig1_fma1(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_one_sample(dgp::Variant::fma1, r, p, s, o);
}
void run_fig1_bridge(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_one_sample(dgp::Variant::brownian_bridge, r, p, s, o);
}

// ---- self-normalized vs long-run-variance benchmarks, sweep over the
// AR coefficient; the mean sits at the boundary of the null ----

void run_fig2_lrv(const Resolved& r, double kappa, std::uint64_t seed,
                  std::vector<MethodDraw>& out) {
  auto spec = error_spec(dgp::Variant::far1, basis::Family::fourier, r.n, seed,
                         r.grid_resolution);
  spec.kappa = kappa;
  spec.mean = {dgp::MeanKind::sin_bump, r.delta};
  const auto x = dgp::simulate(spec);
  const double stat = meantest::one_sample_statistic(x);
  out.push_back({"self_norm", Crit::pivot_w, stat,
                 meantest::one_sample_normalizer(x, harness_nu(), NormalizerKind::standard)});
  const double root_n = std::sqrt(static_cast<double>(x.size()));
  const auto kernel = longrun::longrun_kernel(x, longrun::default_bandwidth(x.size()));
  const double tau_hat = std::sqrt(longrun::tau2_hat(x, kernel).tau2);
  out.push_back({"lrv_plugin", Crit::gaussian, stat, tau_hat / root_n});
  // The mean lies in the span of one basis function, so the long-run
  // standard deviation is sqrt(delta) / (1 - kappa) exactly.
  const double tau_true = std::sqrt(r.delta) / (1.0 - kappa);
  out.push_back({"lrv_true", Crit::gaussian, stat, tau_true / root_n});
}

// ---- two independent samples, sweep over the second mean's amplitude ----

void run_two_sample(dgp::Variant variant, const Resolved& r, double a, std::uint64_t seed,
                    std::vector<MethodDraw>& out) {
  const rng::SeedChain chain(seed);
  auto sx = error_spec(variant, basis::Family::bspline, r.m, chain.mix(1).value(),
                       r.grid_resolution);
  auto sy = error_spec(variant, basis::Family::bspline, r.n, chain.mix(2).value(),
                       r.grid_resolution);
  sy.mean = {dgp::MeanKind::parabola, a};
  const auto x = dgp::simulate(sx);
  const auto y = dgp::simulate(sy);
  const double stat = meantest::two_sample_statistic(x, y);
  const double v = meantest::two_sample_normalizer(x, y, harness_nu(), NormalizerKind::standard);
  out.push_back({"self_norm", Crit::pivot_w, stat, v});
}

void run_fig3_iid(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_two_sample(dgp::Variant::iid_basis, r, p, s, o);
}
void run_fig3_fma1(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_two_sample(dgp::Variant::fma1, r, p, s, o);
}
void run_fig3_bridge(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_two_sample(dgp::Variant::brownian_bridge, r, p, s, o);
}

// ---- normalizer bake-off on shared two-sample data ----

void run_normalizers(dgp::Variant variant, const Resolved& r, double a, std::uint64_t seed,
                     std::vector<MethodDraw>& out) {
  const rng::SeedChain chain(seed);
  auto sx = error_spec(variant, basis::Family::bspline, r.m, chain.mix(1).value(),
                       r.grid_resolution);
  auto sy = error_spec(variant, basis::Family::bspline, r.n, chain.mix(2).value(),
                       r.grid_resolution);
  sy.mean = {dgp::MeanKind::parabola, a};
  const auto x = dgp::simulate(sx);
  const auto y = dgp::simulate(sy);
  const double stat = meantest::two_sample_statistic(x, y);
  out.push_back({"standard", Crit::pivot_w, stat,
                 meantest::two_sample_normalizer(x, y, harness_nu(), NormalizerKind::standard)});
  out.push_back({"sup", Crit::pivot_wstar, stat,
                 meantest::two_sample_normalizer(x, y, harness_nu(), NormalizerKind::sup)});
  out.push_back({"abs", Crit::pivot_wstarstar, stat,
                 meantest::two_sample_normalizer(x, y, harness_nu(), NormalizerKind::abs)});
}

void run_fig4_fma(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_normalizers(dgp::Variant::fma1, r, p, s, o);
}
void run_fig4_kraus(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_normalizers(dgp::Variant::kraus_t5, r, p, s, o);
}
void run_appA_heavy(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_normalizers(dgp::Variant::heavy_t5_basis, r, p, s, o);
}

// ---- two dependent samples cut from one continuous MA stream ----

void run_dependent(bool scale_second, const Resolved& r, double a, std::uint64_t seed,
                   std::vector<MethodDraw>& out) {
  const auto spec = error_spec(dgp::Variant::fma1, basis::Family::bspline, r.m + r.n, seed,
                               r.grid_resolution);
  const auto errors = dgp::simulate_errors(spec);
  const auto x = errors.slice(0, r.m);
  auto y = errors.slice(r.m, r.m + r.n);
  const auto mean2 = dgp::make_mean({dgp::MeanKind::parabola, a}, y.grid());
  const double s = scale_second ? std::sqrt(3.0) : 1.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    auto row = y.curve(j);
    for (std::size_t g = 0; g < row.size(); ++g) row[g] = s * row[g] + mean2[g];
  }
  const double stat = meantest::two_sample_statistic(x, y);
  const double v = meantest::two_sample_normalizer(x, y, harness_nu(), NormalizerKind::standard);
  out.push_back({"self_norm", Crit::pivot_w, stat, v});
}

void run_dep_first(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_dependent(false, r, p, s, o);
}
void run_dep_second(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_dependent(true, r, p, s, o);
}

// ---- change point in the mean, break at theta0 = 0.5 ----

void run_cp(dgp::Variant variant, double post_scale, const Resolved& r, double a,
            std::uint64_t seed, std::vector<MethodDraw>& out) {
  const auto spec = error_spec(variant, basis::Family::bspline, r.n, seed, r.grid_resolution);
  const auto grid = core::Grid::regular(r.grid_resolution);
  const auto mu = core::Curve::zero(grid);
  const auto jump = dgp::make_mean({dgp::MeanKind::parabola, a}, grid);
  const auto x = dgp::sample_with_mean_break(spec, 0.5, mu, jump, post_scale);
  const auto fit = cpoint::estimate_changepoint(x, r.trim);
  const double stat = cpoint::cp_statistic(x, fit.theta_hat);
  const double v = cpoint::cp_normalizer(x, fit.theta_hat, harness_nu(), NormalizerKind::standard);
  out.push_back({"self_norm", Crit::pivot_w, stat, v});
}

void run_fig5_iid(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_cp(dgp::Variant::iid_basis, 1.0, r, p, s, o);
}
void run_fig5_fma1(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_cp(dgp::Variant::fma1, 1.0, r, p, s, o);
}
void run_fig5_fma1_var(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_cp(dgp::Variant::fma1, std::sqrt(3.0), r, p, s, o);
}

// ---- covariance comparisons, sweep over the scale a of the second
// sample (a = 1 is equality, the default delta puts a = 1.5 on the
// boundary) ----

void run_cov2s(dgp::SigmaProfile profile, double kappa, const Resolved& r, double a,
               std::uint64_t seed, std::vector<MethodDraw>& out) {
  auto spec = error_spec(dgp::Variant::cov_scenario, basis::Family::fourier, 0, seed,
                         r.grid_resolution);
  spec.sigma = profile;
  spec.kappa = kappa;
  const auto [x, y] = dgp::simulate_cov_pair(spec, r.m, r.n, a);
  const double stat = covtest::cov_two_sample_statistic(x, y);
  const double v = covtest::cov_two_sample_normalizer(x, y, harness_nu(),
                                                      NormalizerKind::standard);
  out.push_back({"self_norm", Crit::pivot_w, stat, v});
}

void run_fig7_a(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_cov2s(dgp::SigmaProfile::inv_i_sq, 0.7, r, p, s, o);
}
void run_fig7_b(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_cov2s(dgp::SigmaProfile::geometric, 0.7, r, p, s, o);
}
void run_ta1_a(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_cov2s(dgp::SigmaProfile::inv_i_sq, 0.0, r, p, s, o);
}
void run_ta1_b(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_cov2s(dgp::SigmaProfile::geometric, 0.0, r, p, s, o);
}

void run_covcp(dgp::SigmaProfile profile, const Resolved& r, double a, std::uint64_t seed,
               std::vector<MethodDraw>& out) {
  auto spec = error_spec(dgp::Variant::cov_scenario, basis::Family::fourier, r.n, seed,
                         r.grid_resolution);
  spec.sigma = profile;
  spec.kappa = 0.7;
  const auto x = dgp::sample_with_cov_break(spec, 0.5, a);
  const auto fit = covtest::cov_estimate_changepoint(x, r.trim);
  const double stat = covtest::cov_cp_statistic(x, fit.theta_hat);
  const double v = covtest::cov_cp_normalizer(x, fit.theta_hat, harness_nu(),
                                              NormalizerKind::standard);
  out.push_back({"self_norm", Crit::pivot_w, stat, v});
}

void run_fig8_a(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_covcp(dgp::SigmaProfile::inv_i_sq, r, p, s, o);
}
void run_fig8_b(const Resolved& r, double p, std::uint64_t s, std::vector<MethodDraw>& o) {
  run_covcp(dgp::SigmaProfile::geometric, r, p, s, o);
}

// ---- registry ----

std::vector<double> range_sweep(double lo, double hi, double step) {
  std::vector<double> out;
  for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(v);
  return out;
}

const std::vector<ScenarioDef>& registry() {
  static const std::vector<ScenarioDef> defs = [] {
    constexpr double kDelta02 = 0.2 * 0.2 / 30.0;
    constexpr double kDelta03 = 0.3 * 0.3 / 30.0;
    const double cov_a = dgp::cov_population_distance(1.5, 0.7, dgp::SigmaProfile::inv_i_sq, 21);
    const double cov_b = dgp::cov_population_distance(1.5, 0.7, dgp::SigmaProfile::geometric, 21);
    const double cov_a_iid =
        dgp::cov_population_distance(1.5, 0.0, dgp::SigmaProfile::inv_i_sq, 21);
    const double cov_b_iid =
        dgp::cov_population_distance(1.5, 0.0, dgp::SigmaProfile::geometric, 21);
    const std::vector<double> delta_sweep = range_sweep(0.0, 0.05, 0.005);
    const std::vector<double> a_mean = range_sweep(0.0, 0.5, 0.05);
    const std::vector<double> a_cov = range_sweep(1.0, 2.0, 0.1);
    const std::vector<double> kappas{0.0, 0.2, 0.4, 0.6, 0.8};
    const std::vector<double> boundary_cov{1.5};
    const std::vector<double> three_alphas{0.01, 0.05, 0.10};

    std::vector<ScenarioDef> v;
    v.push_back({"fig1_iid",
                 "one-sample mean test, iid basis errors; sweep = squared mean norm",
                 {200, 0, 0.02, delta_sweep, {0.05}},
                 &run_fig1_iid});
    v.push_back({"fig1_fma1",
                 "one-sample mean test, MA(1) errors with a random operator",
                 {200, 0, 0.02, delta_sweep, {0.05}},
                 &run_fig1_fma1});
    v.push_back({"fig1_bridge",
                 "one-sample mean test, Brownian bridge errors",
                 {200, 0, 0.02, delta_sweep, {0.05}},
                 &run_fig1_bridge});
    v.push_back({"fig2_lrv_comparison",
                 "self-normalized vs plug-in vs known long-run variance at the null "
                 "boundary, AR(1) errors; sweep = AR coefficient",
                 {100, 0, 0.5, kappas, {0.05}},
                 &run_fig2_lrv,
                 Kind::lrv_comparison,
                 {Crit::pivot_w, Crit::gaussian}});
    v.push_back({"fig3_two_sample_iid",
                 "two-sample mean test, iid basis errors; sweep = second mean amplitude",
                 {100, 100, kDelta02, a_mean, {0.05}},
                 &run_fig3_iid});
    v.push_back({"fig3_two_sample_fma1",
                 "two-sample mean test, MA(1) errors",
                 {100, 100, kDelta02, a_mean, {0.05}},
                 &run_fig3_fma1});
    v.push_back({"fig3_two_sample_bridge",
                 "two-sample mean test, Brownian bridge errors",
                 {100, 100, kDelta02, a_mean, {0.05}},
                 &run_fig3_bridge});
    v.push_back({"fig4_normalizers_fma",
                 "standard / sup / abs normalizers on shared two-sample MA(1) data",
                 {100, 50, kDelta02, a_mean, {0.05}},
                 &run_fig4_fma,
                 Kind::normalizer_comparison,
                 {Crit::pivot_w, Crit::pivot_wstar, Crit::pivot_wstarstar}});
    v.push_back({"fig4_normalizers_kraus",
                 "normalizer comparison on heavy-tailed trigonometric errors",
                 {100, 50, kDelta02, a_mean, {0.05}},
                 &run_fig4_kraus,
                 Kind::normalizer_comparison,
                 {Crit::pivot_w, Crit::pivot_wstar, Crit::pivot_wstarstar}});
    v.push_back({"appA_heavy_normalizers",
                 "normalizer comparison on heavy-tailed basis-coefficient errors",
                 {100, 50, kDelta02, a_mean, {0.05}},
                 &run_appA_heavy,
                 Kind::normalizer_comparison,
                 {Crit::pivot_w, Crit::pivot_wstar, Crit::pivot_wstarstar}});
    v.push_back({"appA_dependent_first",
                 "two-sample mean test on one continuous MA(1) stream",
                 {100, 100, kDelta03, a_mean, {0.05}},
                 &run_dep_first});
    v.push_back({"appA_dependent_second",
                 "dependent two-sample test, second segment errors scaled by sqrt(3)",
                 {100, 100, kDelta03, a_mean, {0.05}},
                 &run_dep_second});
    v.push_back({"fig5_cp_iid",
                 "mean change point test at theta0 = 0.5, iid errors; sweep = jump amplitude",
                 {200, 0, kDelta03, a_mean, {0.05}},
                 &run_fig5_iid});
    v.push_back({"fig5_cp_fma1",
                 "mean change point test, MA(1) errors",
                 {200, 0, kDelta03, a_mean, {0.05}},
                 &run_fig5_fma1});
    v.push_back({"fig5_cp_fma1_var",
                 "mean change point test, MA(1) errors scaled by sqrt(3) after the break",
                 {200, 0, kDelta03, a_mean, {0.05}},
                 &run_fig5_fma1_var});
    v.push_back({"fig7_cov2s_A",
                 "two-sample covariance test, MA(1) pairs, variances 1/i^2; sweep = scale a",
                 {200, 200, cov_a, a_cov, {0.05}},
                 &run_fig7_a});
    v.push_back({"fig7_cov2s_B",
                 "two-sample covariance test, MA(1) pairs, geometric variances",
                 {200, 200, cov_b, a_cov, {0.05}},
                 &run_fig7_b});
    v.push_back({"fig8_covcp_A",
                 "covariance change point test at theta0 = 0.5, variances 1/i^2",
                 {200, 0, cov_a, a_cov, {0.05}},
                 &run_fig8_a});
    v.push_back({"fig8_covcp_B",
                 "covariance change point test, geometric variances",
                 {200, 0, cov_b, a_cov, {0.05}},
                 &run_fig8_b});
    v.push_back({"tableA1_cov_iid_A",
                 "covariance test level at the boundary, independent data, variances 1/i^2",
                 {200, 200, cov_a_iid, boundary_cov, three_alphas},
                 &run_ta1_a});
    v.push_back({"tableA1_cov_iid_B",
                 "covariance test level at the boundary, independent data, geometric variances",
                 {200, 200, cov_b_iid, boundary_cov, three_alphas},
                 &run_ta1_b});
    return v;
  }();
  return defs;
}

const ScenarioDef& find_scenario(const std::string& name) {
  static const std::map<std::string, std::string> aliases = {
      {"fig3_two_sample", "fig3_two_sample_iid"}, {"fig4_normalizers", "fig4_normalizers_fma"},
      {"fig5_cp", "fig5_cp_iid"},                 {"fig7_cov2s", "fig7_cov2s_A"},
      {"fig8_covcp", "fig8_covcp_A"},             {"tableA1_cov_iid", "tableA1_cov_iid_B"},
      {"fig1", "fig1_iid"}};
  std::string wanted = name;
  if (auto it = aliases.find(wanted); it != aliases.end()) wanted = it->second;
  for (const auto& def : registry())
    if (def.name == wanted) return def;
  throw precondition_error("unknown scenario: " + name);
}

Resolved resolve(const ExperimentSpec& spec, const ScenarioDef& def) {
  Resolved r;
  r.scenario = def.name;
  r.sweep = spec.sweep.empty() ? def.defaults.sweep : spec.sweep;
  r.alphas = spec.alphas.empty() ? def.defaults.alphas : spec.alphas;
  r.replications = spec.ci_mode ? std::min<std::size_t>(spec.replications, 300)
                                : spec.replications;
  r.master_seed = spec.master_seed;
  r.grid_resolution = spec.grid_resolution == 0 ? 100 : spec.grid_resolution;
  r.n = spec.n == 0 ? def.defaults.n : spec.n;
  r.m = spec.m == 0 ? def.defaults.m : spec.m;
  r.delta = spec.delta > 0.0 ? spec.delta : def.defaults.delta;
  r.trim = spec.trim;
  r.cache_dir = spec.cache_dir;
  r.pivot_sim = spec.pivot_sim;
  require(r.replications >= 100, "experiments need at least 100 replications");
  require(!r.sweep.empty(), "experiment sweep must not be empty");
  for (double a : r.alphas)
    require(a > 0.0 && a < 1.0, "alpha must lie in (0,1)");
  require(r.delta > 0.0, "experiment needs a positive relevance margin");
  require(r.n >= 2, "experiment needs a sample size of at least 2");
  return r;
}

std::uint64_t replication_seed(const Resolved& r, std::size_t sweep_idx, std::size_t rep) {
  return rng::SeedChain(r.master_seed)
      .mix(rng::fnv1a(r.scenario))
      .mix(static_cast<std::uint64_t>(sweep_idx))
      .mix(static_cast<std::uint64_t>(rep))
      .value();
}

pivotal::PivotKind pivot_of(Crit crit) {
  switch (crit) {
    case Crit::pivot_w: return pivotal::PivotKind::W;
    case Crit::pivot_wstar: return pivotal::PivotKind::WStar;
    case Crit::pivot_wstarstar: return pivotal::PivotKind::WStarStar;
    case Crit::gaussian: break;
  }
  throw std::logic_error("no pivot law for the gaussian critical value");
}

// Critical value per (crit family, alpha index).
std::array<std::vector<double>, 4> critical_values(const Resolved& r,
                                                   const std::vector<Crit>& crits) {
  std::vector<double> probs = pivotal::default_probabilities();
  for (double a : r.alphas) {
    probs.push_back(a);
    probs.push_back(1.0 - a);
  }
  std::sort(probs.begin(), probs.end());
  probs.erase(std::unique(probs.begin(), probs.end(),
                          [](double x, double y) { return std::fabs(x - y) < 1e-12; }),
              probs.end());

  std::array<std::vector<double>, 4> crit_values;
  for (Crit crit : crits) {
    auto& values = crit_values[static_cast<std::size_t>(crit)];
    if (crit == Crit::gaussian) {
      for (double a : r.alphas) values.push_back(rng::normal_quantile(1.0 - a));
      continue;
    }
    const auto table = pivotal::ensure_table(r.cache_dir, pivot_of(crit), harness_nu(), probs,
                                             r.pivot_sim);
    for (double a : r.alphas) values.push_back(table.at(1.0 - a));
  }
  return crit_values;
}

}  // namespace

const std::vector<ScenarioInfo>& list_scenarios() {
  static const std::vector<ScenarioInfo> infos = [] {
    std::vector<ScenarioInfo> v;
    for (const auto& def : registry()) v.push_back({def.name, def.summary});
    return v;
  }();
  return infos;
}

RejectionTable run_experiment(const ExperimentSpec& spec) {
  const ScenarioDef& def = find_scenario(spec.scenario);
  const Resolved r = resolve(spec, def);
  const auto crit_values = critical_values(r, def.crits);

  RejectionTable table;
  std::vector<MethodDraw> draws;
  for (std::size_t sweep_idx = 0; sweep_idx < r.sweep.size(); ++sweep_idx) {
    const double param = r.sweep[sweep_idx];
    // method -> per-alpha rejection counts, in first-seen order
    std::vector<std::pair<const char*, std::vector<std::size_t>>> counts;
    for (std::size_t rep = 0; rep < r.replications; ++rep) {
      draws.clear();
      def.runner(r, param, replication_seed(r, sweep_idx, rep), draws);
      for (const auto& draw : draws) {
        auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& c) {
          return std::string_view(c.first) == draw.method;
        });
        if (it == counts.end()) {
          counts.emplace_back(draw.method, std::vector<std::size_t>(r.alphas.size(), 0));
          it = std::prev(counts.end());
        }
        const auto& values = crit_values[static_cast<std::size_t>(draw.crit)];
        for (std::size_t ai = 0; ai < r.alphas.size(); ++ai)
          if (draw.statistic > r.delta + values[ai] * draw.scale) ++it->second[ai];
      }
    }
    for (const auto& [method, per_alpha] : counts) {
      for (std::size_t ai = 0; ai < r.alphas.size(); ++ai) {
        RateRow row;
        row.scenario = r.scenario;
        row.param = param;
        row.method = method;
        row.alpha = r.alphas[ai];
        row.n = r.n;
        row.m = r.m;
        row.replications = r.replications;
        row.rate = static_cast<double>(per_alpha[ai]) / static_cast<double>(r.replications);
        row.std_error = std::sqrt(row.rate * (1.0 - row.rate) /
                                  static_cast<double>(r.replications));
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

RejectionTable compare_normalizers(const ExperimentSpec& spec) {
  const ScenarioDef& def = find_scenario(spec.scenario);
  require(def.kind == Kind::normalizer_comparison,
          "scenario does not compare normalizers: " + def.name);
  return run_experiment(spec);
}

RejectionTable compare_lrv(const ExperimentSpec& spec) {
  const ScenarioDef& def = find_scenario(spec.scenario);
  require(def.kind == Kind::lrv_comparison,
          "scenario does not compare variance estimators: " + def.name);
  return run_experiment(spec);
}

std::string RejectionTable::to_csv() const {
  std::string out = "scenario,param,method,alpha,n,m,rate,std_error,replications\n";
  char buf[320];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%s,%.17g,%zu,%zu,%.17g,%.17g,%zu\n",
                  row.scenario.c_str(), row.param, row.method.c_str(), row.alpha, row.n,
                  row.m, row.rate, row.std_error, row.replications);
    out += buf;
  }
  return out;
}

std::string manifest_json(const ExperimentSpec& spec) {
  const ScenarioDef& def = find_scenario(spec.scenario);
  const Resolved r = resolve(spec, def);
  nlohmann::json j;
  j["scenario"] = r.scenario;
  j["summary"] = def.summary;
  j["sweep"] = r.sweep;
  j["alphas"] = r.alphas;
  j["replications"] = r.replications;
  j["master_seed"] = r.master_seed;
  j["grid_resolution"] = r.grid_resolution;
  j["n"] = r.n;
  j["m"] = r.m;
  j["delta"] = r.delta;
  j["trim"] = r.trim;
  j["nu"] = {{"support", harness_nu().support()}, {"weights", harness_nu().weights()}};
  j["pivot_sim"] = {{"replications", r.pivot_sim.replications},
                    {"bm_steps", r.pivot_sim.bm_steps},
                    {"seed", r.pivot_sim.seed}};
  j["rng_algorithm"] = rng::kAlgorithm;
  j["cache_dir"] = pivotal::cache_dir_or_default(r.cache_dir);
  return j.dump(2);
}

}  // namespace fts::harness
