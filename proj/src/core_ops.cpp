#include "fts/core_ops.hpp"

#include <algorithm>
#include <cmath>

namespace fts::core {

const char* to_string(NormalizerKind kind) {
  switch (kind) {
    case NormalizerKind::standard: return "standard";
    case NormalizerKind::sup: return "sup";
    case NormalizerKind::abs: return "abs";
  }
  return "?";
}

NormalizerKind normalizer_kind_from_string(const std::string& name) {
  if (name == "standard") return NormalizerKind::standard;
  if (name == "sup") return NormalizerKind::sup;
  if (name == "abs") return NormalizerKind::abs;
  throw precondition_error("unknown normalizer kind: " + name);
}

double l2_inner(const Grid& grid, std::span<const double> f, std::span<const double> g) {
  require(f.size() == grid.resolution() && g.size() == grid.resolution(),
          "l2_inner operands must match the grid");
  const auto w = grid.quad_weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += w[i] * f[i] * g[i];
  return acc;
}

double l2_inner(const Curve& f, const Curve& g) {
  require_same_grid(*f.grid(), *g.grid());
  return l2_inner(*f.grid(), f.values(), g.values());
}

double l2_integral(const Grid& grid, std::span<const double> f) {
  require(f.size() == grid.resolution(), "integrand must match the grid");
  const auto w = grid.quad_weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += w[i] * f[i];
  return acc;
}

double surface_l2_sq(const Surface& k) {
  const auto& grid = *k.grid();
  const auto w = grid.quad_weights();
  const std::size_t res = grid.resolution();
  const auto v = k.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < res; ++i) {
    double row = 0.0;
    const double* r = v.data() + i * res;
    for (std::size_t j = 0; j < res; ++j) row += w[j] * r[j] * r[j];
    acc += w[i] * row;
  }
  return acc;
}

double surface_l2_dist_sq(const Surface& a, const Surface& b) {
  require_same_grid(*a.grid(), *b.grid());
  const auto& grid = *a.grid();
  const auto w = grid.quad_weights();
  const std::size_t res = grid.resolution();
  const auto va = a.values();
  const auto vb = b.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < res; ++i) {
    double row = 0.0;
    const double* ra = va.data() + i * res;
    const double* rb = vb.data() + i * res;
    for (std::size_t j = 0; j < res; ++j) {
      const double d = ra[j] - rb[j];
      row += w[j] * d * d;
    }
    acc += w[i] * row;
  }
  return acc;
}

Curve partial_sum(const FunctionalSample& x, double lambda) {
  require(x.size() >= 1, "partial_sum needs a nonempty sample");
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0,1]");
  const std::size_t n = x.size();
  const auto k = static_cast<std::size_t>(floor_index(lambda * static_cast<double>(n)));
  const std::size_t res = x.resolution();
  std::vector<double> acc(res, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    const auto row = x.curve(j);
    for (std::size_t t = 0; t < res; ++t) acc[t] += row[t];
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (double& v : acc) v *= inv;
  return Curve(x.grid(), std::move(acc));
}

Curve range_mean(const FunctionalSample& x, std::size_t lo, std::size_t hi) {
  require(lo >= 1 && lo <= hi && hi <= x.size(), "range_mean needs 1 <= lo <= hi <= n");
  const std::size_t res = x.resolution();
  std::vector<double> acc(res, 0.0);
  for (std::size_t j = lo - 1; j < hi; ++j) {
    const auto row = x.curve(j);
    for (std::size_t t = 0; t < res; ++t) acc[t] += row[t];
  }
  const double inv = 1.0 / static_cast<double>(hi - lo + 1);
  for (double& v : acc) v *= inv;
  return Curve(x.grid(), std::move(acc));
}

double self_normalizer(const LambdaProfile& profile, const NuMeasure& nu,
                       NormalizerKind kind) {
  const auto it_one = profile.find(1.0);
  require(it_one != profile.end(), "profile must contain lambda = 1");
  const double p_one = it_one->second;

  double acc = 0.0;
  double sup = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    const double lam = nu.support()[i];
    const double w = nu.weights()[i];
    const auto it = profile.find(lam);
    require(it != profile.end(), "profile is missing a nu support point");
    const double dev = it->second - lam * lam * p_one;
    switch (kind) {
      case NormalizerKind::standard: acc += w * dev * dev; break;
      case NormalizerKind::abs: acc += w * std::fabs(dev); break;
      case NormalizerKind::sup:
        if (w > 0.0) sup = std::max(sup, std::fabs(dev));
        break;
    }
  }
  switch (kind) {
    case NormalizerKind::standard: return std::sqrt(acc);
    case NormalizerKind::abs: return acc;
    case NormalizerKind::sup: return sup;
  }
  return 0.0;
}

PrefixSums::PrefixSums(const FunctionalSample& x)
    : n_(x.size()), res_(x.resolution()), sums_((x.size() + 1) * x.resolution(), 0.0) {
  for (std::size_t j = 0; j < n_; ++j) {
    const auto row = x.curve(j);
    const double* prev = sums_.data() + j * res_;
    double* next = sums_.data() + (j + 1) * res_;
    for (std::size_t t = 0; t < res_; ++t) next[t] = prev[t] + row[t];
  }
}

std::span<const double> PrefixSums::upto(std::size_t k) const {
  require(k <= n_, "prefix index out of range");
  return {sums_.data() + k * res_, res_};
}

void PrefixSums::window_mean(std::size_t lo, std::size_t hi, double divisor,
                             std::span<double> out) const {
  require(lo <= hi && hi <= n_, "invalid prefix window");
  require(out.size() == res_, "output buffer size mismatch");
  const double* a = sums_.data() + lo * res_;
  const double* b = sums_.data() + hi * res_;
  const double inv = 1.0 / divisor;
  for (std::size_t t = 0; t < res_; ++t) out[t] = (b[t] - a[t]) * inv;
}

}  // namespace fts::core
