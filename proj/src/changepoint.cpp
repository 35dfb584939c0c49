#include "fts/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fts::cpoint {

using core::Curve;
using core::FunctionalSample;
using core::LambdaProfile;
using core::NuMeasure;
using core::NormalizerKind;

double CusumProfile::at(std::size_t k) const {
  require(k >= k_lo && k <= k_hi(), "split index outside the admissible range");
  return values[k - k_lo];
}

namespace {

struct TrimRange {
  std::size_t k_lo;
  std::size_t k_hi;
};

// Admissible split range [floor(N trim) + 1, N - floor(N trim)].
TrimRange trim_range(std::size_t n, double trim) {
  require(trim >= 0.0 && trim < 0.5, "trim must lie in [0, 0.5)");
  const auto margin = static_cast<std::size_t>(floor_index(trim * static_cast<double>(n)));
  const std::size_t lo = margin + 1;
  const std::size_t hi = n - margin;
  require(lo <= hi, "trim leaves no admissible split index");
  return {lo, hi};
}

std::size_t argmax_smallest(const CusumProfile& profile) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < profile.values.size(); ++i)
    if (profile.values[i] > profile.values[best]) best = i;
  return profile.k_lo + best;
}

}  // namespace

CusumProfile cusum_profile(const FunctionalSample& x, double trim) {
  const std::size_t n = x.size();
  require(n >= 2, "cusum profile needs at least two curves");
  const TrimRange range = trim_range(n, trim);

  core::PrefixSums prefix(x);
  const std::size_t res = x.resolution();
  std::vector<double> pre(res);
  std::vector<double> post(res);
  const double dn = static_cast<double>(n);

  CusumProfile out;
  out.k_lo = range.k_lo;
  out.values.reserve(range.k_hi - range.k_lo + 1);
  for (std::size_t k = range.k_lo; k <= range.k_hi; ++k) {
    if (k >= n) {
      out.values.push_back(0.0);  // empty right segment by convention
      continue;
    }
    const double dk = static_cast<double>(k);
    prefix.window_mean(0, k, dk, pre);
    prefix.window_mean(k, n, dn - dk, post);
    for (std::size_t t = 0; t < res; ++t) pre[t] -= post[t];
    const double gap = core::l2_inner(*x.grid(), pre, pre);
    out.values.push_back((dk / dn) * (1.0 - dk / dn) * gap);
  }
  return out;
}

ChangePointFit estimate_changepoint(const FunctionalSample& x, double trim) {
  ChangePointFit fit;
  fit.trim = trim;
  fit.profile = cusum_profile(x, trim);
  fit.k_hat = argmax_smallest(fit.profile);
  fit.theta_hat = static_cast<double>(fit.k_hat) / static_cast<double>(x.size());
  return fit;
}

double population_cusum(double theta, double theta0, double jump_sq) {
  require(theta > 0.0 && theta < 1.0, "theta must lie in (0,1)");
  require(theta0 > 0.0 && theta0 < 1.0, "theta0 must lie in (0,1)");
  require(jump_sq >= 0.0, "squared jump norm must be nonnegative");
  const double ratio = std::min(theta0 / theta, (1.0 - theta0) / (1.0 - theta));
  return theta * (1.0 - theta) * ratio * ratio * jump_sq;
}

namespace {

struct SplitIndices {
  std::size_t k0;      // floor(N theta)
  std::size_t n;
};

SplitIndices split_at(const FunctionalSample& x, double theta) {
  const std::size_t n = x.size();
  require(theta > 0.0 && theta < 1.0, "split fraction must lie in (0,1)");
  const auto k0 = static_cast<std::size_t>(floor_index(theta * static_cast<double>(n)));
  require(k0 >= 1 && k0 <= n - 1, "split leaves an empty segment");
  return {k0, n};
}

// Values of || cp contrast(lambda) ||^2 at each requested lambda.
LambdaProfile cp_profile(const FunctionalSample& x, double theta, const NuMeasure& nu) {
  const auto [k0, n] = split_at(x, theta);
  core::PrefixSums prefix(x);
  const std::size_t res = x.resolution();
  std::vector<double> pre(res);
  std::vector<double> post(res);
  const double len_pre = static_cast<double>(k0);
  const double len_post = static_cast<double>(n - k0);

  LambdaProfile profile;
  auto value_at = [&](double lambda) {
    const auto a = static_cast<std::size_t>(floor_index(lambda * len_pre));
    const auto b = static_cast<std::size_t>(floor_index(lambda * len_post));
    prefix.window_mean(0, a, len_pre, pre);
    prefix.window_mean(k0, k0 + b, len_post, post);
    for (std::size_t t = 0; t < res; ++t) pre[t] -= post[t];
    return core::l2_inner(*x.grid(), pre, pre);
  };
  for (double lam : nu.support()) profile[lam] = value_at(lam);
  profile[1.0] = value_at(1.0);
  return profile;
}

}  // namespace

Curve cp_contrast(const FunctionalSample& x, double lambda, double theta) {
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0,1]");
  const auto [k0, n] = split_at(x, theta);
  core::PrefixSums prefix(x);
  const std::size_t res = x.resolution();
  const double len_pre = static_cast<double>(k0);
  const double len_post = static_cast<double>(n - k0);
  const auto a = static_cast<std::size_t>(floor_index(lambda * len_pre));
  const auto b = static_cast<std::size_t>(floor_index(lambda * len_post));
  std::vector<double> pre(res);
  std::vector<double> post(res);
  prefix.window_mean(0, a, len_pre, pre);
  prefix.window_mean(k0, k0 + b, len_post, post);
  for (std::size_t t = 0; t < res; ++t) pre[t] -= post[t];
  return Curve(x.grid(), std::move(pre));
}

double cp_statistic(const FunctionalSample& x, double theta) {
  const Curve d = cp_contrast(x, 1.0, theta);
  return core::l2_inner(d, d);
}

double cp_normalizer(const FunctionalSample& x, double theta, const NuMeasure& nu,
                     NormalizerKind kind) {
  return core::self_normalizer(cp_profile(x, theta, nu), nu, kind);
}

ChangePointTestResult changepoint_test(const FunctionalSample& x,
                                       const testing::TestConfig& config, double trim,
                                       std::optional<double> theta_override) {
  ChangePointTestResult result;
  if (theta_override.has_value()) {
    result.fit.theta_hat = *theta_override;
    result.fit.k_hat = split_at(x, *theta_override).k0;
    result.fit.trim = trim;
    result.fit.profile = cusum_profile(x, trim);
  } else {
    result.fit = estimate_changepoint(x, trim);
  }
  const LambdaProfile profile = cp_profile(x, result.fit.theta_hat, config.nu());
  const double stat = profile.at(1.0);
  const double norm =
      core::self_normalizer(profile, config.nu(), config.normalizer_kind());
  result.outcome =
      testing::decide_relevant(stat, norm, config.delta(), config.upper_quantile());
  return result;
}

std::vector<double> binary_segmentation(const FunctionalSample& x, std::size_t k_breaks,
                                        double trim) {
  const std::size_t n = x.size();
  require(k_breaks >= 1, "need at least one break");
  require(n >= k_breaks + 1, "fewer curves than segments");

  struct Segment {
    std::size_t lo;   // curve range [lo, hi), 0-based
    std::size_t hi;
    bool has_split = false;
    std::size_t split = 0;  // global index of the best split
    double value = 0.0;
  };

  auto best_split = [&](Segment& seg) {
    seg.has_split = false;
    const std::size_t len = seg.hi - seg.lo;
    if (len < 2) return;
    const FunctionalSample part = x.slice(seg.lo, seg.hi);
    const CusumProfile profile = cusum_profile(part, trim);
    // A split at the segment end would leave an empty piece; k < len.
    bool found = false;
    std::size_t best_k = 0;
    double best_v = 0.0;
    for (std::size_t k = profile.k_lo; k <= profile.k_hi() && k < len; ++k) {
      const double v = profile.at(k);
      if (!found || v > best_v) {
        found = true;
        best_v = v;
        best_k = k;
      }
    }
    if (!found) return;
    seg.has_split = true;
    seg.split = seg.lo + best_k;
    seg.value = best_v;
  };

  std::vector<Segment> segments{{0, n}};
  best_split(segments.front());
  std::vector<std::size_t> breaks;
  while (breaks.size() < k_breaks) {
    std::size_t pick = segments.size();
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (!segments[i].has_split) continue;
      if (pick == segments.size() || segments[i].value > segments[pick].value ||
          (segments[i].value == segments[pick].value &&
           segments[i].split < segments[pick].split))
        pick = i;
    }
    require(pick != segments.size(), "no segment is long enough to split further");
    Segment chosen = segments[pick];
    breaks.push_back(chosen.split);
    Segment left{chosen.lo, chosen.split};
    Segment right{chosen.split, chosen.hi};
    best_split(left);
    best_split(right);
    segments[pick] = left;
    segments.push_back(right);
  }
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> thetas(breaks.size());
  for (std::size_t i = 0; i < breaks.size(); ++i)
    thetas[i] = static_cast<double>(breaks[i]) / static_cast<double>(n);
  return thetas;
}

MultiCpResult multi_cp_l2_test(const FunctionalSample& x,
                               const testing::TestConfig& config,
                               const MultiCpConfig& multi) {
  const std::size_t n = x.size();
  require(multi.k_breaks >= 1, "need at least one break");

  MultiCpResult result;
  if (multi.breaks.has_value()) {
    result.thetas = *multi.breaks;
    require(result.thetas.size() == multi.k_breaks,
            "supplied breaks disagree with k_breaks");
  } else {
    result.thetas = binary_segmentation(x, multi.k_breaks, multi.trim);
  }

  // Segment boundaries floor(N theta_j) with theta_0 = 0, theta_{K+1} = 1.
  const std::size_t k = multi.k_breaks;
  std::vector<std::size_t> bounds(k + 2);
  bounds[0] = 0;
  bounds[k + 1] = n;
  for (std::size_t j = 1; j <= k; ++j) {
    const double theta = result.thetas[j - 1];
    require(theta > 0.0 && theta < 1.0, "break fractions must lie in (0,1)");
    bounds[j] = static_cast<std::size_t>(floor_index(theta * static_cast<double>(n)));
    require(bounds[j] > bounds[j - 1], "break fractions must be strictly increasing");
  }
  for (std::size_t j = 0; j <= k; ++j)
    require(bounds[j + 1] - bounds[j] >= 2,
            "each segment needs at least two curves; move the breaks or lower k_breaks");

  core::PrefixSums prefix(x);
  const std::size_t res = x.resolution();
  std::vector<double> pre(res);
  std::vector<double> post(res);

  // Summed squared contrasts of consecutive segments at fraction lambda.
  auto value_at = [&](double lambda) {
    double total = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      const std::size_t off_pre = bounds[j - 1];
      const std::size_t off_post = bounds[j];
      const double len_pre = static_cast<double>(bounds[j] - bounds[j - 1]);
      const double len_post = static_cast<double>(bounds[j + 1] - bounds[j]);
      const auto a = static_cast<std::size_t>(floor_index(lambda * len_pre));
      const auto b = static_cast<std::size_t>(floor_index(lambda * len_post));
      prefix.window_mean(off_pre, off_pre + a, len_pre, pre);
      prefix.window_mean(off_post, off_post + b, len_post, post);
      for (std::size_t t = 0; t < res; ++t) pre[t] -= post[t];
      total += core::l2_inner(*x.grid(), pre, pre);
    }
    return total;
  };

  LambdaProfile profile;
  for (double lam : config.nu().support()) profile[lam] = value_at(lam);
  profile[1.0] = value_at(1.0);
  const double stat = profile.at(1.0);
  const double norm =
      core::self_normalizer(profile, config.nu(), config.normalizer_kind());
  result.outcome =
      testing::decide_relevant(stat, norm, config.delta(), config.upper_quantile());
  return result;
}

}  // namespace fts::cpoint
