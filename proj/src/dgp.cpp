#include "fts/dgp.hpp"

#include <cmath>

#include "fts/common.hpp"
#include "fts/core_ops.hpp"

namespace fts::dgp {

using core::Curve;
using core::FunctionalSample;
using core::GridPtr;

double sigma_sq(SigmaProfile profile, std::size_t i) {
  require(i >= 1, "sigma index is 1-based");
  switch (profile) {
    case SigmaProfile::inv_i_sq:
      return 1.0 / (static_cast<double>(i) * static_cast<double>(i));
    case SigmaProfile::geometric:
      return std::pow(1.2, -2.0 * static_cast<double>(i));
    case SigmaProfile::zero:
      return 0.0;
  }
  return 0.0;
}

double sum_sigma_fourth(SigmaProfile profile, std::size_t dimension) {
  double acc = 0.0;
  for (std::size_t i = 1; i <= dimension; ++i) {
    const double s2 = sigma_sq(profile, i);
    acc += s2 * s2;
  }
  return acc;
}

Curve make_mean(const MeanSpec& mean, GridPtr grid) {
  require(grid != nullptr, "mean needs a grid");
  constexpr double two_pi = 6.283185307179586476925286766559;
  std::vector<double> values(grid->resolution(), 0.0);
  switch (mean.kind) {
    case MeanKind::zero:
      break;
    case MeanKind::sin_bump: {
      require(mean.param >= 0.0, "sin bump needs a nonnegative squared norm");
      const double amp = std::sqrt(2.0 * mean.param);
      for (std::size_t g = 0; g < values.size(); ++g)
        values[g] = amp * std::sin(two_pi * grid->point(g));
      break;
    }
    case MeanKind::parabola: {
      for (std::size_t g = 0; g < values.size(); ++g) {
        const double t = grid->point(g);
        values[g] = mean.param * t * (1.0 - t);
      }
      break;
    }
  }
  return Curve(std::move(grid), std::move(values));
}

double spectral_norm(const std::vector<double>& matrix, std::size_t dim) {
  require(matrix.size() == dim * dim, "matrix must be dim x dim");
  // Power iteration on M^T M; deterministic all-ones start.
  std::vector<double> v(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  std::vector<double> mv(dim);
  std::vector<double> mtmv(dim);
  double sigma = 0.0;
  for (int iter = 0; iter < 100000; ++iter) {
    for (std::size_t i = 0; i < dim; ++i) {
      double acc = 0.0;
      const double* row = matrix.data() + i * dim;
      for (std::size_t j = 0; j < dim; ++j) acc += row[j] * v[j];
      mv[i] = acc;
    }
    double norm_mv_sq = 0.0;
    for (double x : mv) norm_mv_sq += x * x;
    const double next = std::sqrt(norm_mv_sq);
    if (next == 0.0) return 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < dim; ++i) acc += matrix[i * dim + j] * mv[i];
      mtmv[j] = acc;
    }
    double norm_mtmv = 0.0;
    for (double x : mtmv) norm_mtmv += x * x;
    norm_mtmv = std::sqrt(norm_mtmv);
    for (std::size_t j = 0; j < dim; ++j) v[j] = mtmv[j] / norm_mtmv;
    if (iter > 0 && std::fabs(next - sigma) <= 1e-12 * std::fmax(1.0, next)) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

FmaOperator draw_fma_operator(const DgpSpec& spec, rng::Engine& engine) {
  const std::size_t dim = spec.basis.dimension;
  FmaOperator op;
  op.dim = dim;
  op.theta.assign(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    const double si = std::sqrt(sigma_sq(spec.sigma, i + 1));
    for (std::size_t j = 0; j < dim; ++j) {
      const double sj = std::sqrt(sigma_sq(spec.sigma, j + 1));
      op.theta[i * dim + j] = spec.kappa * si * sj * engine.normal();
    }
  }
  const double norm = spectral_norm(op.theta, dim);
  if (norm == 0.0) {
    op.degenerate = true;  // all-zero draw: the process degrades to iid
    return op;
  }
  const double scale = spec.spectral_target / norm;
  for (double& v : op.theta) v *= scale;
  return op;
}

namespace {

// curve <- mean of row-major coefficients against the basis matrix.
void expand_coeffs(const std::vector<double>& coeffs, const std::vector<double>& matrix,
                   std::size_t dim, std::size_t res, double scale, double* out) {
  for (std::size_t t = 0; t < res; ++t) out[t] = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double c = coeffs[i] * scale;
    if (c == 0.0) continue;
    const double* row = matrix.data() + i * res;
    for (std::size_t t = 0; t < res; ++t) out[t] += c * row[t];
  }
}

void draw_scaled_normals(rng::Engine& engine, const std::vector<double>& sds,
                         std::vector<double>& out) {
  for (std::size_t i = 0; i < sds.size(); ++i) out[i] = sds[i] * engine.normal();
}

std::vector<double> sigma_sds(const DgpSpec& spec) {
  std::vector<double> sds(spec.basis.dimension);
  for (std::size_t i = 0; i < sds.size(); ++i)
    sds[i] = std::sqrt(sigma_sq(spec.sigma, i + 1));
  return sds;
}

FunctionalSample errors_iid_basis(const DgpSpec& spec, rng::Engine& engine) {
  const auto grid = core::Grid::regular(spec.grid_resolution);
  const std::size_t res = grid->resolution();
  const std::size_t dim = spec.basis.dimension;
  const std::vector<double> matrix = basis::evaluate_matrix(spec.basis, *grid);
  const std::vector<double> sds = sigma_sds(spec);
  FunctionalSample sample(grid, spec.n);
  std::vector<double> coeffs(dim);
  for (std::size_t j = 0; j < spec.n; ++j) {
    draw_scaled_normals(engine, sds, coeffs);
    expand_coeffs(coeffs, matrix, dim, res, spec.error_scale, sample.curve(j).data());
  }
  return sample;
}

FunctionalSample errors_fma1(const DgpSpec& spec, rng::Engine& engine) {
  const auto grid = core::Grid::regular(spec.grid_resolution);
  const std::size_t res = grid->resolution();
  const std::size_t dim = spec.basis.dimension;
  const std::vector<double> matrix = basis::evaluate_matrix(spec.basis, *grid);
  const std::vector<double> sds = sigma_sds(spec);
  const FmaOperator op = draw_fma_operator(spec, engine);

  FunctionalSample sample(grid, spec.n);
  std::vector<double> prev(dim);
  std::vector<double> curr(dim);
  std::vector<double> eps(dim);
  draw_scaled_normals(engine, sds, prev);
  for (std::size_t j = 0; j < spec.n; ++j) {
    draw_scaled_normals(engine, sds, curr);
    for (std::size_t i = 0; i < dim; ++i) {
      double acc = curr[i];
      const double* row = op.theta.data() + i * dim;
      for (std::size_t l = 0; l < dim; ++l) acc += row[l] * prev[l];
      eps[i] = acc;
    }
    expand_coeffs(eps, matrix, dim, res, spec.error_scale, sample.curve(j).data());
    std::swap(prev, curr);
  }
  return sample;
}

FunctionalSample errors_far1(const DgpSpec& spec, rng::Engine& engine) {
  const auto grid = core::Grid::regular(spec.grid_resolution);
  const std::size_t res = grid->resolution();
  const std::size_t dim = spec.basis.dimension;
  require(std::fabs(spec.kappa) < 1.0, "AR coefficient must satisfy |kappa| < 1");
  const std::vector<double> matrix = basis::evaluate_matrix(spec.basis, *grid);
  const std::vector<double> sds = sigma_sds(spec);

  FunctionalSample sample(grid, spec.n);
  std::vector<double> state(dim, 0.0);
  std::vector<double> innov(dim);
  for (std::size_t j = 0; j < spec.burn_in; ++j) {
    draw_scaled_normals(engine, sds, innov);
    for (std::size_t i = 0; i < dim; ++i) state[i] = innov[i] + spec.kappa * state[i];
  }
  for (std::size_t j = 0; j < spec.n; ++j) {
    draw_scaled_normals(engine, sds, innov);
    for (std::size_t i = 0; i < dim; ++i) state[i] = innov[i] + spec.kappa * state[i];
    expand_coeffs(state, matrix, dim, res, spec.error_scale, sample.curve(j).data());
  }
  return sample;
}

FunctionalSample errors_bridge(const DgpSpec& spec, rng::Engine& engine) {
  const auto grid = core::Grid::regular(spec.grid_resolution);
  const std::size_t res = grid->resolution();
  FunctionalSample sample(grid, spec.n);
  std::vector<double> path(res);
  for (std::size_t j = 0; j < spec.n; ++j) {
    path[0] = 0.0;
    for (std::size_t g = 1; g < res; ++g) {
      const double dt = grid->point(g) - grid->point(g - 1);
      path[g] = path[g - 1] + std::sqrt(dt) * engine.normal();
    }
    const double endpoint = path[res - 1];
    auto row = sample.curve(j);
    for (std::size_t g = 0; g < res; ++g)
      row[g] = spec.error_scale * (path[g] - grid->point(g) * endpoint);
  }
  return sample;
}

FunctionalSample errors_heavy_t5(const DgpSpec& spec, rng::Engine& engine) {
  const auto grid = core::Grid::regular(spec.grid_resolution);
  const std::size_t res = grid->resolution();
  const std::size_t dim = spec.basis.dimension;
  const std::vector<double> matrix = basis::evaluate_matrix(spec.basis, *grid);
  // Coefficient scale sqrt(3 sigma_i^2 / 5): unit-variance t5 times sigma_i.
  std::vector<double> scales(dim);
  for (std::size_t i = 0; i < dim; ++i)
    scales[i] = std::sqrt(3.0 * sigma_sq(spec.sigma, i + 1) / 5.0);
  FunctionalSample sample(grid, spec.n);
  std::vector<double> coeffs(dim);
  for (std::size_t j = 0; j < spec.n; ++j) {
    for (std::size_t i = 0; i < dim; ++i) coeffs[i] = scales[i] * engine.student_t5();
    expand_coeffs(coeffs, matrix, dim, res, spec.error_scale, sample.curve(j).data());
  }
  return sample;
}

FunctionalSample errors_kraus_t5(const DgpSpec& spec, rng::Engine& engine) {
  const auto grid = core::Grid::regular(spec.grid_resolution);
  const std::size_t res = grid->resolution();
  constexpr std::size_t terms = 10;
  constexpr double two_pi = 6.283185307179586476925286766559;
  const double root2 = std::sqrt(2.0);
  const double t5_unit = std::sqrt(3.0 / 5.0);  // scales t5 to unit variance

  // Shape rows: sin and cos components with their fixed amplitudes.
  std::vector<double> sin_rows(terms * res);
  std::vector<double> cos_rows(terms * res);
  for (std::size_t k = 1; k <= terms; ++k) {
    const double amp_sin = std::pow(static_cast<double>(k), -1.5) * root2;
    const double amp_cos = std::pow(3.0, -static_cast<double>(k) / 2.0) * root2;
    for (std::size_t g = 0; g < res; ++g) {
      const double t = grid->point(g);
      sin_rows[(k - 1) * res + g] = amp_sin * std::sin(two_pi * static_cast<double>(k) * t);
      cos_rows[(k - 1) * res + g] = amp_cos * std::cos(two_pi * static_cast<double>(k) * t);
    }
  }

  const double root_terms = std::sqrt(static_cast<double>(terms));
  FunctionalSample sample(grid, spec.n);
  for (std::size_t j = 0; j < spec.n; ++j) {
    auto row = sample.curve(j);
    for (std::size_t g = 0; g < res; ++g) row[g] = 0.0;
    for (std::size_t k = 0; k < terms; ++k) {
      const double v = t5_unit * engine.student_t5();
      const double w = t5_unit * engine.student_t5();
      const double* srow = sin_rows.data() + k * res;
      const double* crow = cos_rows.data() + k * res;
      for (std::size_t g = 0; g < res; ++g) row[g] += srow[g] * v + crow[g] * w;
    }
    const double scale = spec.error_scale / root_terms;
    for (std::size_t g = 0; g < res; ++g) row[g] *= scale;
  }
  return sample;
}

// Scalar MA(1) stream: curves formed from eta_j + kappa eta_{j-1}.
FunctionalSample errors_scalar_ma(const DgpSpec& spec, std::size_t count,
                                  rng::Engine& engine) {
  const auto grid = core::Grid::regular(spec.grid_resolution);
  const std::size_t res = grid->resolution();
  const std::size_t dim = spec.basis.dimension;
  const std::vector<double> matrix = basis::evaluate_matrix(spec.basis, *grid);
  const std::vector<double> sds = sigma_sds(spec);
  FunctionalSample sample(grid, count);
  std::vector<double> prev(dim);
  std::vector<double> curr(dim);
  std::vector<double> eps(dim);
  draw_scaled_normals(engine, sds, prev);
  for (std::size_t j = 0; j < count; ++j) {
    draw_scaled_normals(engine, sds, curr);
    for (std::size_t i = 0; i < dim; ++i) eps[i] = curr[i] + spec.kappa * prev[i];
    expand_coeffs(eps, matrix, dim, res, spec.error_scale, sample.curve(j).data());
    std::swap(prev, curr);
  }
  return sample;
}

}  // namespace

FunctionalSample simulate_errors(const DgpSpec& spec) {
  require(spec.n >= 1, "simulation needs n >= 1");
  rng::Engine engine(spec.seed);
  switch (spec.variant) {
    case Variant::iid_basis: return errors_iid_basis(spec, engine);
    case Variant::fma1: return errors_fma1(spec, engine);
    case Variant::far1: return errors_far1(spec, engine);
    case Variant::brownian_bridge: return errors_bridge(spec, engine);
    case Variant::heavy_t5_basis: return errors_heavy_t5(spec, engine);
    case Variant::kraus_t5: return errors_kraus_t5(spec, engine);
    case Variant::cov_scenario:
      throw precondition_error("cov_scenario generates a pair; use simulate_cov_pair");
  }
  throw precondition_error("unknown dgp variant");
}

FunctionalSample simulate(const DgpSpec& spec) {
  FunctionalSample sample = simulate_errors(spec);
  if (spec.mean.kind == MeanKind::zero) return sample;
  const Curve mean = make_mean(spec.mean, sample.grid());
  for (std::size_t j = 0; j < sample.size(); ++j) {
    auto row = sample.curve(j);
    for (std::size_t g = 0; g < row.size(); ++g) row[g] += mean[g];
  }
  return sample;
}

std::pair<FunctionalSample, FunctionalSample> simulate_cov_pair(const DgpSpec& spec,
                                                                std::size_t m,
                                                                std::size_t n,
                                                                double a) {
  require(spec.variant == Variant::cov_scenario,
          "simulate_cov_pair needs the cov_scenario variant");
  require(m >= 2 && n >= 2, "covariance pair needs m, n >= 2");
  rng::Engine engine_x(rng::SeedChain(spec.seed).mix(0xC0F1u).mix(1).value());
  rng::Engine engine_y(rng::SeedChain(spec.seed).mix(0xC0F1u).mix(2).value());
  FunctionalSample x = errors_scalar_ma(spec, m, engine_x);
  DgpSpec spec_y = spec;
  spec_y.error_scale = spec.error_scale * a;
  FunctionalSample y = errors_scalar_ma(spec_y, n, engine_y);
  return {std::move(x), std::move(y)};
}

double cov_population_distance(double a, double kappa, SigmaProfile profile,
                               std::size_t dimension) {
  const double shape = 1.0 - a * a;
  const double ma = 1.0 + kappa * kappa;
  return shape * shape * ma * ma * sum_sigma_fourth(profile, dimension);
}

FunctionalSample sample_with_mean_break(const DgpSpec& error_spec, double theta0,
                                        const Curve& mu, const Curve& jump,
                                        double post_scale) {
  require(theta0 > 0.0 && theta0 < 1.0, "break fraction must lie in (0,1)");
  FunctionalSample sample = simulate_errors(error_spec);
  core::require_same_grid(*sample.grid(), *mu.grid());
  core::require_same_grid(*sample.grid(), *jump.grid());
  const auto k0 = static_cast<std::size_t>(
      floor_index(theta0 * static_cast<double>(sample.size())));
  for (std::size_t j = 0; j < sample.size(); ++j) {
    auto row = sample.curve(j);
    if (j < k0) {
      for (std::size_t g = 0; g < row.size(); ++g) row[g] += mu[g];
    } else {
      for (std::size_t g = 0; g < row.size(); ++g)
        row[g] = mu[g] + jump[g] + post_scale * row[g];
    }
  }
  return sample;
}

FunctionalSample sample_with_cov_break(const DgpSpec& error_spec, double theta0,
                                       double a) {
  require(theta0 > 0.0 && theta0 < 1.0, "break fraction must lie in (0,1)");
  require(error_spec.variant == Variant::cov_scenario,
          "covariance break composition uses the cov_scenario stream");
  rng::Engine engine(rng::SeedChain(error_spec.seed).mix(0xC0F1u).mix(1).value());
  FunctionalSample sample = errors_scalar_ma(error_spec, error_spec.n, engine);
  const auto k0 = static_cast<std::size_t>(
      floor_index(theta0 * static_cast<double>(sample.size())));
  for (std::size_t j = k0; j < sample.size(); ++j) {
    auto row = sample.curve(j);
    for (std::size_t g = 0; g < row.size(); ++g) row[g] *= a;
  }
  return sample;
}

}  // namespace fts::dgp
