#include "fts/cov_tests.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fts::covtest {

using core::FunctionalSample;
using core::LambdaProfile;
using core::NuMeasure;
using core::NormalizerKind;
using core::Surface;

namespace {

void require_nu_floor(const NuMeasure& nu) {
  require(nu.support().front() >= kNuSupportFloor,
          "covariance tests need min(nu support) >= 0.05");
}

// Running second-moment accumulator over a curve sample: after advancing
// to index k it holds sum_{j < k} X_j X_j^T and sum_{j < k} X_j.
class MomentSweep {
 public:
  explicit MomentSweep(const FunctionalSample& x)
      : x_(x), res_(x.resolution()), outer_(res_ * res_, 0.0), sum_(res_, 0.0) {}

  void advance_to(std::size_t k) {
    for (; pos_ < k; ++pos_) {
      const auto row = x_.curve(pos_);
      for (std::size_t s = 0; s < res_; ++s) {
        const double a = row[s];
        double* line = outer_.data() + s * res_;
        for (std::size_t t = 0; t < res_; ++t) line[t] += a * row[t];
      }
      for (std::size_t s = 0; s < res_; ++s) sum_[s] += row[s];
    }
  }

  // Centered window moment over curves [base, pos) scaled by 1/divisor,
  // written into out (size res^2). base_outer/base_sum are the sweep
  // state snapshot at the window start (zeros for base = 0).
  void centered_into(const std::vector<double>& base_outer,
                     const std::vector<double>& base_sum, std::size_t base,
                     double divisor, std::vector<double>& out) const {
    const double w = static_cast<double>(pos_ - base);
    const double inv = 1.0 / divisor;
    if (pos_ == base) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    std::vector<double> mean(res_);
    for (std::size_t s = 0; s < res_; ++s) mean[s] = (sum_[s] - base_sum[s]) / w;
    for (std::size_t s = 0; s < res_; ++s) {
      const double ms = mean[s];
      const double* acc = outer_.data() + s * res_;
      const double* bas = base_outer.data() + s * res_;
      double* line = out.data() + s * res_;
      for (std::size_t t = 0; t < res_; ++t)
        line[t] = (acc[t] - bas[t] - w * ms * mean[t]) * inv;
    }
  }

  const std::vector<double>& outer() const { return outer_; }
  const std::vector<double>& sum() const { return sum_; }
  std::size_t pos() const { return pos_; }

 private:
  const FunctionalSample& x_;
  std::size_t res_;
  std::size_t pos_ = 0;
  std::vector<double> outer_;
  std::vector<double> sum_;
};

double squared_surface_distance(const core::Grid& grid, const std::vector<double>& a,
                                const std::vector<double>& b) {
  const auto w = grid.quad_weights();
  const std::size_t res = grid.resolution();
  double acc = 0.0;
  for (std::size_t s = 0; s < res; ++s) {
    double row = 0.0;
    const double* ra = a.data() + s * res;
    const double* rb = b.data() + s * res;
    for (std::size_t t = 0; t < res; ++t) {
      const double d = ra[t] - rb[t];
      row += w[t] * d * d;
    }
    acc += w[s] * row;
  }
  return acc;
}

// || C_x(lambda) - C_y(lambda) ||^2 for lambda over the nu atoms and 1.
LambdaProfile cov_pair_profile(const FunctionalSample& x, const FunctionalSample& y,
                               const NuMeasure& nu) {
  core::require_same_grid(*x.grid(), *y.grid());
  const std::size_t res = x.resolution();
  const double m = static_cast<double>(x.size());
  const double n = static_cast<double>(y.size());

  std::vector<double> lambdas(nu.support());
  lambdas.push_back(1.0);

  MomentSweep sx(x);
  MomentSweep sy(y);
  const std::vector<double> zero_outer(res * res, 0.0);
  const std::vector<double> zero_sum(res, 0.0);
  std::vector<double> cx(res * res);
  std::vector<double> cy(res * res);

  LambdaProfile profile;
  for (double lam : lambdas) {
    sx.advance_to(static_cast<std::size_t>(floor_index(lam * m)));
    sy.advance_to(static_cast<std::size_t>(floor_index(lam * n)));
    sx.centered_into(zero_outer, zero_sum, 0, m - 1.0, cx);
    sy.centered_into(zero_outer, zero_sum, 0, n - 1.0, cy);
    profile[lam] = squared_surface_distance(*x.grid(), cx, cy);
  }
  return profile;
}

struct CovSplit {
  std::size_t k0;
  std::size_t n;
};

CovSplit cov_split_at(const FunctionalSample& x, double theta) {
  const std::size_t n = x.size();
  require(theta > 0.0 && theta < 1.0, "split fraction must lie in (0,1)");
  const auto k0 = static_cast<std::size_t>(floor_index(theta * static_cast<double>(n)));
  require(k0 >= 2 && n - k0 >= 2,
          "covariance split needs at least two curves on each side");
  return {k0, n};
}

// || cov break contrast(lambda, theta) ||^2 over the nu atoms and 1.
LambdaProfile cov_cp_profile(const FunctionalSample& x, double theta,
                             const NuMeasure& nu) {
  const auto [k0, n] = cov_split_at(x, theta);
  const std::size_t res = x.resolution();
  const double len_pre = static_cast<double>(k0);
  const double len_post = static_cast<double>(n - k0);

  std::vector<double> lambdas(nu.support());
  lambdas.push_back(1.0);

  MomentSweep pre(x);
  MomentSweep post(x);
  post.advance_to(k0);
  const std::vector<double> base_outer = post.outer();
  const std::vector<double> base_sum = post.sum();
  const std::vector<double> zero_outer(res * res, 0.0);
  const std::vector<double> zero_sum(res, 0.0);
  std::vector<double> c1(res * res);
  std::vector<double> c2(res * res);

  LambdaProfile profile;
  for (double lam : lambdas) {
    const auto a = static_cast<std::size_t>(floor_index(lam * len_pre));
    const auto b = static_cast<std::size_t>(floor_index(lam * len_post));
    pre.advance_to(a);
    post.advance_to(k0 + b);
    pre.centered_into(zero_outer, zero_sum, 0, len_pre - 1.0, c1);
    post.centered_into(base_outer, base_sum, k0, len_post - 1.0, c2);
    profile[lam] = squared_surface_distance(*x.grid(), c1, c2);
  }
  return profile;
}

}  // namespace

Surface centered_cov_partial(const FunctionalSample& x, double lambda) {
  require(x.size() >= 2, "partial covariance needs at least two curves");
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0,1]");
  const std::size_t res = x.resolution();
  const double m = static_cast<double>(x.size());
  const auto k = static_cast<std::size_t>(floor_index(lambda * m));

  MomentSweep sweep(x);
  sweep.advance_to(k);
  std::vector<double> out(res * res, 0.0);
  const std::vector<double> zero_outer(res * res, 0.0);
  const std::vector<double> zero_sum(res, 0.0);
  sweep.centered_into(zero_outer, zero_sum, 0, m - 1.0, out);
  return Surface(x.grid(), std::move(out));
}

double cov_two_sample_statistic(const FunctionalSample& x, const FunctionalSample& y) {
  require(x.size() >= 2 && y.size() >= 2, "covariance test needs m, n >= 2");
  const Surface cx = centered_cov_partial(x, 1.0);
  const Surface cy = centered_cov_partial(y, 1.0);
  return core::surface_l2_dist_sq(cx, cy);
}

double cov_two_sample_normalizer(const FunctionalSample& x, const FunctionalSample& y,
                                 const NuMeasure& nu, NormalizerKind kind) {
  require(x.size() >= 2 && y.size() >= 2, "covariance test needs m, n >= 2");
  require_nu_floor(nu);
  return core::self_normalizer(cov_pair_profile(x, y, nu), nu, kind);
}

testing::TestOutcome cov_two_sample_test(const FunctionalSample& x,
                                         const FunctionalSample& y,
                                         const testing::TestConfig& config) {
  require(x.size() >= 2 && y.size() >= 2, "covariance test needs m, n >= 2");
  require_nu_floor(config.nu());
  const LambdaProfile profile = cov_pair_profile(x, y, config.nu());
  const double stat = profile.at(1.0);
  const double norm =
      core::self_normalizer(profile, config.nu(), config.normalizer_kind());
  return testing::decide_relevant(stat, norm, config.delta(), config.upper_quantile());
}

cpoint::CusumProfile cov_cusum_profile(const FunctionalSample& x, double trim) {
  const std::size_t n = x.size();
  require(n >= 5, "covariance cusum needs at least five curves");
  require(trim >= 0.0 && trim < 0.5, "trim must lie in [0, 0.5)");
  const auto margin = static_cast<std::size_t>(floor_index(trim * static_cast<double>(n)));
  const std::size_t k_lo = std::max<std::size_t>(margin + 1, 2);
  const std::size_t k_hi = std::min(n - margin, n - 2);
  require(k_lo <= k_hi, "trim leaves no admissible covariance split");

  const std::size_t res = x.resolution();
  const double dn = static_cast<double>(n);
  const auto w = x.grid()->quad_weights();

  MomentSweep totals(x);
  totals.advance_to(n);
  const std::vector<double>& total_outer = totals.outer();
  const std::vector<double>& total_sum = totals.sum();

  MomentSweep sweep(x);
  sweep.advance_to(k_lo);

  cpoint::CusumProfile out;
  out.k_lo = k_lo;
  out.values.reserve(k_hi - k_lo + 1);
  std::vector<double> mean1(res);
  std::vector<double> mean2(res);
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    sweep.advance_to(k);
    const double dk = static_cast<double>(k);
    const double inv1 = 1.0 / (dk - 1.0);
    const double inv2 = 1.0 / (dn - dk - 1.0);
    const std::vector<double>& part_outer = sweep.outer();
    const std::vector<double>& part_sum = sweep.sum();
    for (std::size_t s = 0; s < res; ++s) {
      mean1[s] = part_sum[s] / dk;
      mean2[s] = (total_sum[s] - part_sum[s]) / (dn - dk);
    }
    double acc = 0.0;
    for (std::size_t s = 0; s < res; ++s) {
      const double m1 = mean1[s];
      const double m2 = mean2[s];
      const double* po = part_outer.data() + s * res;
      const double* to = total_outer.data() + s * res;
      double row = 0.0;
      for (std::size_t t = 0; t < res; ++t) {
        const double c1 = (po[t] - dk * m1 * mean1[t]) * inv1;
        const double c2 = ((to[t] - po[t]) - (dn - dk) * m2 * mean2[t]) * inv2;
        const double d = c1 - c2;
        row += w[t] * d * d;
      }
      acc += w[s] * row;
    }
    out.values.push_back((dk / dn) * (1.0 - dk / dn) * acc);
  }
  return out;
}

cpoint::ChangePointFit cov_estimate_changepoint(const FunctionalSample& x, double trim) {
  cpoint::ChangePointFit fit;
  fit.trim = trim;
  fit.profile = cov_cusum_profile(x, trim);
  std::size_t best = 0;
  for (std::size_t i = 1; i < fit.profile.values.size(); ++i)
    if (fit.profile.values[i] > fit.profile.values[best]) best = i;
  fit.k_hat = fit.profile.k_lo + best;
  fit.theta_hat = static_cast<double>(fit.k_hat) / static_cast<double>(x.size());
  return fit;
}

Surface cov_cp_contrast(const FunctionalSample& x, double lambda, double theta) {
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0,1]");
  const auto [k0, n] = cov_split_at(x, theta);
  const std::size_t res = x.resolution();
  const double len_pre = static_cast<double>(k0);
  const double len_post = static_cast<double>(n - k0);
  const auto a = static_cast<std::size_t>(floor_index(lambda * len_pre));
  const auto b = static_cast<std::size_t>(floor_index(lambda * len_post));

  MomentSweep pre(x);
  pre.advance_to(a);
  const std::vector<double> zero_outer(res * res, 0.0);
  const std::vector<double> zero_sum(res, 0.0);
  std::vector<double> c1(res * res);
  pre.centered_into(zero_outer, zero_sum, 0, len_pre - 1.0, c1);

  MomentSweep post(x);
  post.advance_to(k0);
  const std::vector<double> base_outer = post.outer();
  const std::vector<double> base_sum = post.sum();
  post.advance_to(k0 + b);
  std::vector<double> c2(res * res);
  post.centered_into(base_outer, base_sum, k0, len_post - 1.0, c2);

  for (std::size_t i = 0; i < c1.size(); ++i) c1[i] -= c2[i];
  return Surface(x.grid(), std::move(c1));
}

double cov_cp_statistic(const FunctionalSample& x, double theta) {
  const Surface d = cov_cp_contrast(x, 1.0, theta);
  return core::surface_l2_sq(d);
}

double cov_cp_normalizer(const FunctionalSample& x, double theta, const NuMeasure& nu,
                         NormalizerKind kind) {
  require_nu_floor(nu);
  return core::self_normalizer(cov_cp_profile(x, theta, nu), nu, kind);
}

CovChangePointTestResult cov_changepoint_test(const FunctionalSample& x,
                                              const testing::TestConfig& config,
                                              double trim,
                                              std::optional<double> theta_override) {
  require_nu_floor(config.nu());
  CovChangePointTestResult result;
  if (theta_override.has_value()) {
    result.fit.theta_hat = *theta_override;
    result.fit.k_hat = cov_split_at(x, *theta_override).k0;
    result.fit.trim = trim;
    result.fit.profile = cov_cusum_profile(x, trim);
  } else {
    result.fit = cov_estimate_changepoint(x, trim);
  }
  const LambdaProfile profile = cov_cp_profile(x, result.fit.theta_hat, config.nu());
  const double stat = profile.at(1.0);
  const double norm =
      core::self_normalizer(profile, config.nu(), config.normalizer_kind());
  result.outcome =
      testing::decide_relevant(stat, norm, config.delta(), config.upper_quantile());
  return result;
}

}  // namespace fts::covtest
