#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fts/basis.hpp"
#include "fts/grid.hpp"
#include "fts/rng.hpp"

namespace fts::dgp {

enum class Variant {
  iid_basis,       // iid Gaussian basis coefficients
  fma1,            // functional MA(1) with a random operator, rescaled
  far1,            // functional AR(1), scalar coefficient, burn-in
  brownian_bridge, // standard Brownian bridge paths
  heavy_t5_basis,  // t5 basis coefficients, unit-variance scaling
  kraus_t5,        // fixed trigonometric expansion with t5 scores
  cov_scenario,    // scalar MA(1) pair for the covariance tests
};

enum class SigmaProfile {
  inv_i_sq,   // sigma_i^2 = 1 / i^2
  geometric,  // sigma_i^2 = 1.2^(-2 i)
  zero,       // degenerate (all coefficients zero)
};

double sigma_sq(SigmaProfile profile, std::size_t i);  // i is 1-based
double sum_sigma_fourth(SigmaProfile profile, std::size_t dimension);

enum class MeanKind {
  zero,
  sin_bump,   // sqrt(2 p) sin(2 pi t); squared L2 norm exactly p
  parabola,   // p t (1 - t);           squared L2 norm p^2 / 30
};

struct MeanSpec {
  MeanKind kind = MeanKind::zero;
  double param = 0.0;
};

core::Curve make_mean(const MeanSpec& mean, core::GridPtr grid);

struct DgpSpec {
  Variant variant = Variant::iid_basis;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t grid_resolution = 100;
  basis::BasisSpec basis;                      // ignored by bridge/kraus
  SigmaProfile sigma = SigmaProfile::inv_i_sq;
  MeanSpec mean;
  // kappa: MA operator pre-scale for fma1 (immaterial after the spectral
  // rescale, kept configurable), AR coefficient for far1, scalar MA
  // coefficient for cov_scenario.
  double kappa = 0.0;
  double spectral_target = 0.7;                // fma1 operator norm
  std::size_t burn_in = 100;                   // far1
  double error_scale = 1.0;                    // multiplies error curves
};

// Random MA(1) operator: entries N(0, (kappa sigma_i sigma_j)^2) rescaled
// to the target spectral norm by power iteration. degenerate marks an
// all-zero draw (kappa = 0 or zero sigma), kept as-is: the process
// falls back to iid.
struct FmaOperator {
  std::size_t dim = 0;
  std::vector<double> theta;  // row-major dim x dim
  bool degenerate = false;
};

FmaOperator draw_fma_operator(const DgpSpec& spec, rng::Engine& engine);
double spectral_norm(const std::vector<double>& matrix, std::size_t dim);

// Zero-mean error stream for the spec (mean ignored, error_scale
// applied). Deterministic in the spec including the seed.
core::FunctionalSample simulate_errors(const DgpSpec& spec);

// Errors plus the mean curve. cov_scenario is not valid here.
core::FunctionalSample simulate(const DgpSpec& spec);

// Covariance-test pair: X_j = e_j + kappa e_{j-1} and an independent
// Y scaled by a throughout. kappa = 0 is the iid flavor.
std::pair<core::FunctionalSample, core::FunctionalSample> simulate_cov_pair(
    const DgpSpec& spec, std::size_t m, std::size_t n, double a);

// Population squared distance of the pair's covariance kernels:
// (1 - a^2)^2 (1 + kappa^2)^2 sum_i sigma_i^4.
double cov_population_distance(double a, double kappa, SigmaProfile profile,
                               std::size_t dimension);

// Mean-break composition on a single continuous error stream:
// X_j = mu + e_j before the break at floor(theta0 n), and
// X_j = mu + jump + post_scale * e_j after it.
core::FunctionalSample sample_with_mean_break(const DgpSpec& error_spec, double theta0,
                                              const core::Curve& mu,
                                              const core::Curve& jump,
                                              double post_scale = 1.0);

// Covariance-break composition: the error curve is scaled by a after the
// break (X_j = e_j, then a * e_j).
core::FunctionalSample sample_with_cov_break(const DgpSpec& error_spec, double theta0,
                                             double a);

}  // namespace fts::dgp
