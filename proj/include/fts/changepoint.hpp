#pragma once

#include <optional>
#include <vector>

#include "fts/test_types.hpp"

namespace fts::cpoint {

// CUSUM-type profile over candidate split indices: for k in the trimmed
// admissible range,
//   f(k) = (k/N)(1 - k/N) * || mean(1..k) - mean(k+1..N) ||^2,
// with f(N) = 0 by convention (reachable only at trim = 0).
struct CusumProfile {
  std::size_t k_lo = 0;               // first admissible k
  std::vector<double> values;         // f(k_lo), f(k_lo + 1), ...
  std::size_t k_hi() const { return k_lo + values.size() - 1; }
  double at(std::size_t k) const;
};

CusumProfile cusum_profile(const core::FunctionalSample& x, double trim);

struct ChangePointFit {
  double theta_hat = 0.0;
  std::size_t k_hat = 0;
  double trim = 0.0;
  CusumProfile profile;
};

// Argmax of the profile; ties resolved to the smallest k.
ChangePointFit estimate_changepoint(const core::FunctionalSample& x, double trim);

// Population counterpart of the profile under a single break at theta0
// with jump norm-square jump_sq: theta(1-theta) * min(theta0/theta,
// (1-theta0)/(1-theta))^2 * jump_sq.
double population_cusum(double theta, double theta0, double jump_sq);

// Break contrast at split fraction theta and partial-sum fraction lambda:
//   (1/floor(N theta)) sum_{j <= floor(lambda floor(N theta))} X_j
// - (1/(N - floor(N theta))) sum over the matching window after the split.
core::Curve cp_contrast(const core::FunctionalSample& x, double lambda, double theta);

double cp_statistic(const core::FunctionalSample& x, double theta);
double cp_normalizer(const core::FunctionalSample& x, double theta,
                     const core::NuMeasure& nu, core::NormalizerKind kind);

struct ChangePointTestResult {
  testing::TestOutcome outcome;
  ChangePointFit fit;
};

// Test of H0: ||jump||^2 <= delta at a single (estimated or supplied)
// break. theta_override skips estimation and fixes the split fraction.
ChangePointTestResult changepoint_test(const core::FunctionalSample& x,
                                       const testing::TestConfig& config, double trim,
                                       std::optional<double> theta_override = {});

// Greedy binary segmentation into k_breaks split fractions (sorted).
// The trim fraction is reused relative to each segment's length.
std::vector<double> binary_segmentation(const core::FunctionalSample& x,
                                        std::size_t k_breaks, double trim);

struct MultiCpConfig {
  std::size_t k_breaks = 1;
  double trim = 0.05;
  // Breaks may be supplied instead of estimated.
  std::optional<std::vector<double>> breaks;
};

struct MultiCpResult {
  testing::TestOutcome outcome;
  std::vector<double> thetas;
};

// Test of H0: sum_j ||jump_j||^2 <= delta across k_breaks breaks, using
// the summed squared contrasts of consecutive estimated segments.
MultiCpResult multi_cp_l2_test(const core::FunctionalSample& x,
                               const testing::TestConfig& config,
                               const MultiCpConfig& multi);

}  // namespace fts::cpoint
