#include "fts/mean_tests.hpp"

#include <vector>

namespace fts::meantest {

using core::Curve;
using core::FunctionalSample;
using core::LambdaProfile;
using core::NuMeasure;
using core::NormalizerKind;

namespace {

// Squared L2 norm of the partial-sum curve at each nu atom and at 1.
LambdaProfile one_sample_profile(const FunctionalSample& x, const NuMeasure& nu) {
  core::PrefixSums prefix(x);
  const std::size_t res = x.resolution();
  const double n = static_cast<double>(x.size());
  std::vector<double> buf(res);
  LambdaProfile profile;
  auto value_at = [&](double lambda) {
    const auto k = static_cast<std::size_t>(floor_index(lambda * n));
    prefix.window_mean(0, k, n, buf);
    return core::l2_inner(*x.grid(), buf, buf);
  };
  for (double lam : nu.support()) profile[lam] = value_at(lam);
  profile[1.0] = value_at(1.0);
  return profile;
}

LambdaProfile two_sample_profile(const FunctionalSample& x, const FunctionalSample& y,
                                 const NuMeasure& nu) {
  core::require_same_grid(*x.grid(), *y.grid());
  core::PrefixSums px(x);
  core::PrefixSums py(y);
  const std::size_t res = x.resolution();
  const double m = static_cast<double>(x.size());
  const double n = static_cast<double>(y.size());
  std::vector<double> bx(res);
  std::vector<double> by(res);
  LambdaProfile profile;
  auto value_at = [&](double lambda) {
    const auto kx = static_cast<std::size_t>(floor_index(lambda * m));
    const auto ky = static_cast<std::size_t>(floor_index(lambda * n));
    px.window_mean(0, kx, m, bx);
    py.window_mean(0, ky, n, by);
    for (std::size_t t = 0; t < res; ++t) bx[t] -= by[t];
    return core::l2_inner(*x.grid(), bx, bx);
  };
  for (double lam : nu.support()) profile[lam] = value_at(lam);
  profile[1.0] = value_at(1.0);
  return profile;
}

}  // namespace

double one_sample_statistic(const FunctionalSample& x) {
  require(x.size() >= 1, "one-sample statistic needs a nonempty sample");
  const Curve mean = core::partial_sum(x, 1.0);
  return core::l2_inner(mean, mean);
}

double one_sample_normalizer(const FunctionalSample& x, const NuMeasure& nu,
                             NormalizerKind kind) {
  require(x.size() >= 1, "one-sample normalizer needs a nonempty sample");
  return core::self_normalizer(one_sample_profile(x, nu), nu, kind);
}

testing::TestOutcome one_sample_test(const FunctionalSample& x,
                                     const testing::TestConfig& config) {
  const LambdaProfile profile = one_sample_profile(x, config.nu());
  const double stat = profile.at(1.0);
  const double norm = core::self_normalizer(profile, config.nu(), config.normalizer_kind());
  return testing::decide_relevant(stat, norm, config.delta(), config.upper_quantile());
}

testing::TestOutcome one_sample_equivalence_test(const FunctionalSample& x,
                                                 const testing::TestConfig& config) {
  const LambdaProfile profile = one_sample_profile(x, config.nu());
  const double stat = profile.at(1.0);
  const double norm = core::self_normalizer(profile, config.nu(), config.normalizer_kind());
  return testing::decide_equivalence(stat, norm, config.delta(), config.lower_quantile());
}

Curve two_sample_contrast(const FunctionalSample& x, const FunctionalSample& y,
                          double lambda) {
  core::require_same_grid(*x.grid(), *y.grid());
  require(x.size() >= 1 && y.size() >= 1, "two-sample contrast needs nonempty samples");
  Curve cx = core::partial_sum(x, lambda);
  const Curve cy = core::partial_sum(y, lambda);
  for (std::size_t t = 0; t < cx.resolution(); ++t) cx[t] -= cy[t];
  return cx;
}

double two_sample_statistic(const FunctionalSample& x, const FunctionalSample& y) {
  const Curve d = two_sample_contrast(x, y, 1.0);
  return core::l2_inner(d, d);
}

double two_sample_normalizer(const FunctionalSample& x, const FunctionalSample& y,
                             const NuMeasure& nu, NormalizerKind kind) {
  require(x.size() >= 1 && y.size() >= 1, "two-sample normalizer needs nonempty samples");
  return core::self_normalizer(two_sample_profile(x, y, nu), nu, kind);
}

testing::TestOutcome two_sample_test(const FunctionalSample& x,
                                     const FunctionalSample& y,
                                     const testing::TestConfig& config) {
  require(x.size() >= 1 && y.size() >= 1, "two-sample test needs nonempty samples");
  const LambdaProfile profile = two_sample_profile(x, y, config.nu());
  const double stat = profile.at(1.0);
  const double norm = core::self_normalizer(profile, config.nu(), config.normalizer_kind());
  return testing::decide_relevant(stat, norm, config.delta(), config.upper_quantile());
}

}  // namespace fts::meantest
