#pragma once

#include "fts/test_types.hpp"

namespace fts::meantest {

// Squared L2 norm of the sample mean: the one-sample deviation measure
// for the hypothesis "||mu||^2 <= delta".
double one_sample_statistic(const core::FunctionalSample& x);

// Self-normalizer built from the partial-sum profile
// p(lambda) = || (1/n) sum_{j <= floor(n lambda)} X_j ||^2.
double one_sample_normalizer(const core::FunctionalSample& x, const core::NuMeasure& nu,
                             core::NormalizerKind kind);

// Tests of H0: ||mu||^2 <= delta (relevant deviation) and of
// H0: ||mu||^2 > delta (equivalence), both self-normalized.
testing::TestOutcome one_sample_test(const core::FunctionalSample& x,
                                     const testing::TestConfig& config);
testing::TestOutcome one_sample_equivalence_test(const core::FunctionalSample& x,
                                                 const testing::TestConfig& config);

// Two-sample contrast curve at a pair of partial-sum fractions:
// (1/m) sum_{j <= floor(m lambda)} X_j - (1/n) sum_{j <= floor(n lambda)} Y_j.
core::Curve two_sample_contrast(const core::FunctionalSample& x,
                                const core::FunctionalSample& y, double lambda);

double two_sample_statistic(const core::FunctionalSample& x,
                            const core::FunctionalSample& y);
double two_sample_normalizer(const core::FunctionalSample& x,
                             const core::FunctionalSample& y, const core::NuMeasure& nu,
                             core::NormalizerKind kind);

// Test of H0: ||mu_x - mu_y||^2 <= delta.
testing::TestOutcome two_sample_test(const core::FunctionalSample& x,
                                     const core::FunctionalSample& y,
                                     const testing::TestConfig& config);

}  // namespace fts::meantest
