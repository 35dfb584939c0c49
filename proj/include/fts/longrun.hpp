#pragma once

#include <cstddef>

#include "fts/test_types.hpp"

namespace fts::longrun {

enum class LrvKernel { bartlett };

// Default lag window: floor(n^(1/3)).
std::size_t default_bandwidth(std::size_t n);

// Long-run covariance kernel estimate with Bartlett weights
// w_l = 1 - l/(h+1):
//   C(s,t) = g_0(s,t) + sum_{l=1..h} w_l (g_l(s,t) + g_l(t,s)),
// where g_l is the lag-l autocovariance of the demeaned curves with a
// 1/n divisor. bandwidth 0 reduces to g_0.
core::Surface longrun_kernel(const core::FunctionalSample& x, std::size_t bandwidth);

struct Tau2Estimate {
  double tau2 = 0.0;
  // Set when the quadratic form came out negative and was truncated to 0.
  bool truncated = false;
};

// Plug-in variance of the one-sample statistic:
//   tau^2 = 4 * integral integral mean(s) mean(t) C(s,t) ds dt,
// truncated at zero.
Tau2Estimate tau2_hat(const core::FunctionalSample& x, const core::Surface& kernel);

struct LrvTestResult {
  testing::TestOutcome outcome;
  std::size_t bandwidth = 0;
  LrvKernel kernel = LrvKernel::bartlett;
  Tau2Estimate tau2;
};

// Gaussian-quantile benchmark test of H0: ||mu||^2 <= delta; rejects when
// the statistic exceeds delta + z_{1-alpha} * tau_hat / sqrt(n). delta
// must be positive, alpha in (0,1).
LrvTestResult lrv_one_sample_test(const core::FunctionalSample& x, double delta,
                                  double alpha, std::size_t bandwidth);

// Same decision rule with a known (population) tau.
testing::TestOutcome lrv_one_sample_test_known_tau(const core::FunctionalSample& x,
                                                   double delta, double alpha,
                                                   double tau);

}  // namespace fts::longrun
