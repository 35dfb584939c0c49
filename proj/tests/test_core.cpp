#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "fts/common.hpp"
#include "fts/core_ops.hpp"
#include "fts/grid.hpp"
#include "fts/nu_measure.hpp"
#include "fts/rng.hpp"

using namespace fts;
using core::Curve;
using core::FunctionalSample;
using core::Grid;
using core::NuMeasure;
using core::NormalizerKind;

namespace {

core::GridPtr grid5() { return Grid::regular(5); }

FunctionalSample constant_sample(core::GridPtr grid, const std::vector<double>& levels) {
  FunctionalSample x(grid, levels.size());
  for (std::size_t j = 0; j < levels.size(); ++j)
    for (double& v : x.curve(j)) v = levels[j];
  return x;
}

FunctionalSample random_sample(core::GridPtr grid, std::size_t n, std::uint64_t seed) {
  rng::Engine eng(seed);
  FunctionalSample x(grid, n);
  for (double& v : x.data()) v = eng.normal();
  return x;
}

}  // namespace

TEST_CASE("floor_index snaps near-integer products and floors the rest") {
  CHECK(floor_index(20.0 * 0.35) == 7);          // 6.999...96 in binary
  CHECK(floor_index(20.0 * (7.0 / 20.0)) == 7);
  CHECK(floor_index(6.9999999) == 6);            // 1e-7 away: a real floor
  CHECK(floor_index(2.5) == 2);
  CHECK(floor_index(-0.3) == -1);
  CHECK(floor_index(0.0) == 0);
  CHECK(floor_index(1e9 * (1.0 / 3.0) * 3.0) == 1000000000);
}

TEST_CASE("regular grid covers [0,1] and its trapezoid weights sum to one") {
  const auto g = Grid::regular(101);
  CHECK(g->resolution() == 101);
  CHECK(g->point(0) == 0.0);
  CHECK(g->point(100) == 1.0);
  CHECK(g->step() == doctest::Approx(0.01));
  const auto w = g->quad_weights();
  CHECK(w.front() == doctest::Approx(g->step() / 2.0));
  CHECK(w[1] == doctest::Approx(g->step()));
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("l2_inner integrates exactly representable cases") {
  const auto g = grid5();  // step 1/4: weights are exact binary fractions
  std::vector<double> ones(5, 1.0);
  std::vector<double> ramp{0.0, 0.25, 0.5, 0.75, 1.0};
  CHECK(core::l2_inner(*g, ones, ones) == 1.0);
  // trapezoid is exact for linear integrands
  CHECK(core::l2_inner(*g, ramp, ones) == 0.5);
  CHECK(core::l2_integral(*g, ramp) == 0.5);

  // brute force agreement on random data
  const auto x = random_sample(Grid::regular(33), 2, 7);
  const auto w = x.grid()->quad_weights();
  double expect = 0.0;
  for (std::size_t t = 0; t < 33; ++t) expect += w[t] * x.curve(0)[t] * x.curve(1)[t];
  CHECK(core::l2_inner(*x.grid(), x.curve(0), x.curve(1)) ==
        doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("mismatched grids are rejected") {
  const Curve a(Grid::regular(5), std::vector<double>(5, 1.0));
  const Curve b(Grid::regular(9), std::vector<double>(9, 1.0));
  CHECK_THROWS_AS(core::l2_inner(a, b), precondition_error);
}

TEST_CASE("partial_sum matches a direct loop at every cutoff") {
  const auto x = random_sample(Grid::regular(17), 9, 123);
  for (double lambda : {0.0, 0.1, 1.0 / 3.0, 0.5, 0.77, 1.0}) {
    const Curve p = core::partial_sum(x, lambda);
    const auto k = static_cast<std::size_t>(floor_index(lambda * 9.0));
    std::vector<double> expect(17, 0.0);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t t = 0; t < 17; ++t) expect[t] += x.curve(j)[t];
    for (std::size_t t = 0; t < 17; ++t) {
      CHECK(p[t] == doctest::Approx(expect[t] / 9.0).epsilon(1e-15));
    }
  }
  CHECK_THROWS_AS(core::partial_sum(x, -0.1), precondition_error);
  CHECK_THROWS_AS(core::partial_sum(x, 1.1), precondition_error);
}

TEST_CASE("range_mean agrees with partial_sum over the full range") {
  const auto x = random_sample(Grid::regular(11), 6, 5);
  const Curve full = core::partial_sum(x, 1.0);
  const Curve mean = core::range_mean(x, 1, 6);
  for (std::size_t t = 0; t < 11; ++t) CHECK(full[t] * 6.0 == mean[t] * 6.0);

  const Curve window = core::range_mean(x, 3, 5);
  for (std::size_t t = 0; t < 11; ++t) {
    const double expect = (x.curve(2)[t] + x.curve(3)[t] + x.curve(4)[t]) / 3.0;
    CHECK(window[t] == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("PrefixSums window_mean equals the naive mean") {
  const auto x = random_sample(Grid::regular(13), 8, 99);
  core::PrefixSums prefix(x);
  std::vector<double> buf(13);
  prefix.window_mean(2, 7, 5.0, buf);
  for (std::size_t t = 0; t < 13; ++t) {
    double s = 0.0;
    for (std::size_t j = 2; j < 7; ++j) s += x.curve(j)[t];
    CHECK(buf[t] == doctest::Approx(s / 5.0).epsilon(1e-14));
  }
  prefix.window_mean(3, 3, 4.0, buf);
  for (double v : buf) CHECK(v == 0.0);
}

TEST_CASE("nu measure validation") {
  CHECK_THROWS_AS(NuMeasure({0.5, 0.2}, {0.5, 0.5}), precondition_error);  // unsorted
  CHECK_THROWS_AS(NuMeasure({0.0, 0.5}, {0.5, 0.5}), precondition_error);  // atom at 0
  CHECK_THROWS_AS(NuMeasure({0.5, 1.0}, {0.5, 0.5}), precondition_error);  // atom at 1
  CHECK_THROWS_AS(NuMeasure({0.3, 0.6}, {0.6, 0.6}), precondition_error);  // sum != 1
  CHECK_THROWS_AS(NuMeasure({0.3}, {1.0, 0.0}), precondition_error);       // size mismatch

  const auto nu = NuMeasure::uniform_atoms(19);
  CHECK(nu.size() == 19);
  CHECK(nu.support().front() == doctest::Approx(0.05));
  CHECK(nu.support().back() == doctest::Approx(0.95));
  for (double w : nu.weights()) CHECK(w == doctest::Approx(1.0 / 19.0));
  CHECK(nu == NuMeasure::uniform_atoms(19));
  CHECK_FALSE(nu == NuMeasure::uniform_atoms(4));
  CHECK(nu.fingerprint() == NuMeasure::uniform_atoms(19).fingerprint());
  CHECK(nu.fingerprint() != NuMeasure::uniform_atoms(4).fingerprint());
}

TEST_CASE("normalizer kinds round-trip through their names") {
  for (auto kind : {NormalizerKind::standard, NormalizerKind::sup, NormalizerKind::abs})
    CHECK(core::normalizer_kind_from_string(core::to_string(kind)) == kind);
  CHECK_THROWS_AS(core::normalizer_kind_from_string("median"), precondition_error);
}

// Four constant curves (1,3,5,7), nu concentrated at 1/2: the partial-sum
// profile has p(1/2) = 1 and p(1) = 16, so every normalizer equals
// |1 - (1/2)^2 * 16| = 3. All quantities are exact binary fractions.
TEST_CASE("hand-computed normalizer on four constant curves") {
  const auto x = constant_sample(grid5(), {1.0, 3.0, 5.0, 7.0});
  const NuMeasure nu({0.5}, {1.0});

  core::LambdaProfile profile;
  profile[0.5] = core::l2_inner(core::partial_sum(x, 0.5), core::partial_sum(x, 0.5));
  profile[1.0] = core::l2_inner(core::partial_sum(x, 1.0), core::partial_sum(x, 1.0));
  CHECK(profile[0.5] == 1.0);
  CHECK(profile[1.0] == 16.0);

  CHECK(core::self_normalizer(profile, nu, NormalizerKind::standard) == 3.0);
  CHECK(core::self_normalizer(profile, nu, NormalizerKind::sup) == 3.0);
  CHECK(core::self_normalizer(profile, nu, NormalizerKind::abs) == 3.0);
}

// Identical curves align the partial sums with the lambda^2 scaling at
// every atom of the default measure, so the normalizer vanishes. This
// breaks if the cutoff floor(20 * i/20) ever rounds down to i - 1.
TEST_CASE("exact-alignment normalizer is numerically zero") {
  const auto x = constant_sample(grid5(), std::vector<double>(20, 1.0));
  const auto nu = NuMeasure::uniform_atoms(19);
  core::LambdaProfile profile;
  for (double lam : nu.support()) {
    const Curve p = core::partial_sum(x, lam);
    profile[lam] = core::l2_inner(p, p);
  }
  const Curve full = core::partial_sum(x, 1.0);
  profile[1.0] = core::l2_inner(full, full);

  CHECK(core::self_normalizer(profile, nu, NormalizerKind::standard) < 1e-12);
  CHECK(core::self_normalizer(profile, nu, NormalizerKind::sup) < 1e-12);
  CHECK(core::self_normalizer(profile, nu, NormalizerKind::abs) < 1e-12);
}

TEST_CASE("self_normalizer rejects profiles missing an atom or the endpoint") {
  const NuMeasure nu({0.25, 0.75}, {0.5, 0.5});
  core::LambdaProfile missing_atom{{0.25, 1.0}, {1.0, 4.0}};
  CHECK_THROWS_AS(core::self_normalizer(missing_atom, nu, NormalizerKind::standard),
                  precondition_error);
  core::LambdaProfile missing_end{{0.25, 1.0}, {0.75, 2.0}};
  CHECK_THROWS_AS(core::self_normalizer(missing_end, nu, NormalizerKind::standard),
                  precondition_error);
}

TEST_CASE("sup normalizer ignores zero-weight atoms, abs and standard weight them") {
  const NuMeasure nu({0.25, 0.5}, {0.0, 1.0});
  core::LambdaProfile profile{{0.25, 100.0}, {0.5, 1.0}, {1.0, 0.0}};
  // atom 0.25 deviates by 100 but carries no mass
  CHECK(core::self_normalizer(profile, nu, NormalizerKind::sup) == 1.0);
  CHECK(core::self_normalizer(profile, nu, NormalizerKind::abs) == 1.0);
  CHECK(core::self_normalizer(profile, nu, NormalizerKind::standard) == 1.0);
}

TEST_CASE("surface distances match hand values on constant kernels") {
  const auto g = grid5();
  const core::Surface a(g, std::vector<double>(25, 2.0));
  const core::Surface b(g, std::vector<double>(25, -1.0));
  CHECK(core::surface_l2_sq(a) == 4.0);
  CHECK(core::surface_l2_dist_sq(a, b) == 9.0);
  CHECK(core::surface_l2_dist_sq(a, a) == 0.0);
}

TEST_CASE("sample slices preserve curve content") {
  const auto x = random_sample(Grid::regular(7), 6, 3);
  const FunctionalSample mid = x.slice(2, 5);
  CHECK(mid.size() == 3);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t t = 0; t < 7; ++t) CHECK(mid.curve(j)[t] == x.curve(j + 2)[t]);
  CHECK_THROWS_AS(x.slice(4, 2), precondition_error);
  CHECK_THROWS_AS(x.slice(0, 7), precondition_error);
}
