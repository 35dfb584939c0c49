#pragma once

#include <map>
#include <span>

#include "fts/grid.hpp"
#include "fts/nu_measure.hpp"

namespace fts::core {

enum class NormalizerKind { standard, sup, abs };

const char* to_string(NormalizerKind kind);
NormalizerKind normalizer_kind_from_string(const std::string& name);

// Trapezoidal L2 inner product <f,g> on the common grid of f and g.
double l2_inner(const Curve& f, const Curve& g);
double l2_inner(const Grid& grid, std::span<const double> f, std::span<const double> g);

// Integral of f over [0,1] (trapezoid).
double l2_integral(const Grid& grid, std::span<const double> f);

// Double integral of K(s,t)^2 over the unit square (tensor trapezoid).
double surface_l2_sq(const Surface& k);

// Squared L2 distance between two kernels on the same grid.
double surface_l2_dist_sq(const Surface& a, const Surface& b);

// Scaled partial sum (1/n) sum_{j <= floor(n*lambda)} X_j as a curve.
// lambda in [0,1]; lambda = 0 gives the zero curve.
Curve partial_sum(const FunctionalSample& x, double lambda);

// Mean of curves with indices [lo, hi], 1-based inclusive. Summation is
// index-ascending so partial_sum(x, 1) == range_mean(x, 1, n) exactly.
Curve range_mean(const FunctionalSample& x, std::size_t lo, std::size_t hi);

// lambda -> p(lambda); must hold an entry for every nu atom and for 1.0.
using LambdaProfile = std::map<double, double>;

// Self-normalizer from a profile of squared-deviation values:
//   standard: sqrt( sum_i w_i (p(l_i) - l_i^2 p(1))^2 )
//   sup:      max over atoms with positive weight of |p(l_i) - l_i^2 p(1)|
//   abs:      sum_i w_i |p(l_i) - l_i^2 p(1)|
double self_normalizer(const LambdaProfile& profile, const NuMeasure& nu,
                       NormalizerKind kind);

// Internal building block shared by the test modules: running prefix sums
// of the sample, prefix[k] = sum of the first k curves (prefix[0] = 0).
class PrefixSums {
 public:
  explicit PrefixSums(const FunctionalSample& x);
  std::size_t size() const { return n_; }
  std::size_t resolution() const { return res_; }
  // Sum of curves 1..k (k may be 0).
  std::span<const double> upto(std::size_t k) const;
  // Writes (upto(hi) - upto(lo)) / divisor into out.
  void window_mean(std::size_t lo, std::size_t hi, double divisor,
                   std::span<double> out) const;

 private:
  std::size_t n_;
  std::size_t res_;
  std::vector<double> sums_;
};

}  // namespace fts::core
