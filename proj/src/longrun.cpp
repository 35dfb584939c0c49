#include "fts/longrun.hpp"

#include <cmath>
#include <vector>

#include "fts/rng.hpp"

namespace fts::longrun {

using core::FunctionalSample;
using core::Surface;

std::size_t default_bandwidth(std::size_t n) {
  require(n >= 1, "bandwidth rule needs a nonempty sample");
  return static_cast<std::size_t>(floor_index(std::cbrt(static_cast<double>(n))));
}

Surface longrun_kernel(const FunctionalSample& x, std::size_t bandwidth) {
  const std::size_t n = x.size();
  require(n >= 2, "long-run kernel needs at least two curves");
  require(bandwidth < n, "bandwidth must be smaller than the sample size");
  const std::size_t res = x.resolution();

  // Demeaned curves, contiguous for the lag loops.
  std::vector<double> resid(n * res);
  {
    std::vector<double> mean(res, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const auto row = x.curve(j);
      for (std::size_t t = 0; t < res; ++t) mean[t] += row[t];
    }
    for (std::size_t t = 0; t < res; ++t) mean[t] /= static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto row = x.curve(j);
      double* out = resid.data() + j * res;
      for (std::size_t t = 0; t < res; ++t) out[t] = row[t] - mean[t];
    }
  }

  // Lag-l autocovariance of the residual curves, 1/n divisor:
  // g_l(s,t) = (1/n) sum_j r_j(s) r_{j+l}(t).
  std::vector<double> acc(res * res);
  std::vector<double> kernel(res * res, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t lag = 0; lag <= bandwidth; ++lag) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t j = 0; j + lag < n; ++j) {
      const double* a = resid.data() + j * res;
      const double* b = resid.data() + (j + lag) * res;
      for (std::size_t s = 0; s < res; ++s) {
        const double av = a[s];
        double* line = acc.data() + s * res;
        for (std::size_t t = 0; t < res; ++t) line[t] += av * b[t];
      }
    }
    if (lag == 0) {
      for (std::size_t i = 0; i < kernel.size(); ++i) kernel[i] += acc[i] * inv_n;
    } else {
      const double w =
          1.0 - static_cast<double>(lag) / (static_cast<double>(bandwidth) + 1.0);
      for (std::size_t s = 0; s < res; ++s)
        for (std::size_t t = 0; t < res; ++t)
          kernel[s * res + t] +=
              w * inv_n * (acc[s * res + t] + acc[t * res + s]);
    }
  }
  return Surface(x.grid(), std::move(kernel));
}

Tau2Estimate tau2_hat(const FunctionalSample& x, const Surface& kernel) {
  core::require_same_grid(*x.grid(), *kernel.grid());
  require(x.size() >= 1, "tau2 needs a nonempty sample");
  const core::Curve mean = core::partial_sum(x, 1.0);
  const auto w = x.grid()->quad_weights();
  const std::size_t res = x.resolution();

  double quad = 0.0;
  for (std::size_t s = 0; s < res; ++s) {
    double inner = 0.0;
    for (std::size_t t = 0; t < res; ++t) inner += w[t] * mean[t] * kernel.at(s, t);
    quad += w[s] * mean[s] * inner;
  }
  Tau2Estimate est;
  est.tau2 = 4.0 * quad;
  if (est.tau2 < 0.0) {
    est.tau2 = 0.0;
    est.truncated = true;
  }
  return est;
}

LrvTestResult lrv_one_sample_test(const FunctionalSample& x, double delta, double alpha,
                                  std::size_t bandwidth) {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
  LrvTestResult result;
  result.bandwidth = bandwidth;
  const Surface kernel = longrun_kernel(x, bandwidth);
  result.tau2 = tau2_hat(x, kernel);
  const double tau = std::sqrt(result.tau2.tau2);
  result.outcome = lrv_one_sample_test_known_tau(x, delta, alpha, tau);
  return result;
}

testing::TestOutcome lrv_one_sample_test_known_tau(const FunctionalSample& x,
                                                   double delta, double alpha,
                                                   double tau) {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
  require(tau >= 0.0, "tau must be nonnegative");
  require(x.size() >= 1, "test needs a nonempty sample");
  const core::Curve mean = core::partial_sum(x, 1.0);
  const double stat = core::l2_inner(mean, mean);
  const double z = rng::normal_quantile(1.0 - alpha);
  const double scaled = tau / std::sqrt(static_cast<double>(x.size()));
  return testing::decide_relevant(stat, scaled, delta, z);
}

}  // namespace fts::longrun
