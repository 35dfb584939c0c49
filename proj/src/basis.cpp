#include "fts/basis.hpp"

#include <cmath>

#include "fts/common.hpp"

namespace fts::basis {

double fourier_value(std::size_t j, double t) {
  require(j >= 1, "basis index is 1-based");
  if (j == 1) return 1.0;
  constexpr double pi = 3.141592653589793238462643383279502884;
  const double root2 = std::sqrt(2.0);
  if (j % 2 == 0) return root2 * std::sin(static_cast<double>(j) * pi * t);
  return root2 * std::cos(static_cast<double>(j - 1) * pi * t);
}

namespace {

// Clamped equidistant knot vector for dim functions of the given order.
std::vector<double> knot_vector(std::size_t dim, std::size_t order) {
  const std::size_t interior = dim - order;
  std::vector<double> knots(dim + order);
  for (std::size_t i = 0; i < order; ++i) knots[i] = 0.0;
  for (std::size_t i = 1; i <= interior; ++i)
    knots[order - 1 + i] =
        static_cast<double>(i) / static_cast<double>(interior + 1);
  for (std::size_t i = dim; i < dim + order; ++i) knots[i] = 1.0;
  return knots;
}

// Cox-de Boor evaluation of all dim B-splines at t; nonzeros are the
// order values ending at the knot span of t.
void bspline_row(const std::vector<double>& knots, std::size_t dim, std::size_t order,
                 double t, double* out) {
  const std::size_t degree = order - 1;
  for (std::size_t i = 0; i < dim; ++i) out[i] = 0.0;

  // Knot span index: largest k with knots[k] <= t, clamped to dim - 1.
  std::size_t span = dim - 1;
  if (t < knots[dim]) {
    std::size_t lo = degree;
    std::size_t hi = dim;
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (t < knots[mid]) hi = mid; else lo = mid;
    }
    span = lo;
  }

  std::vector<double> values(order, 0.0);
  std::vector<double> left(order, 0.0);
  std::vector<double> right(order, 0.0);
  values[0] = 1.0;
  for (std::size_t j = 1; j <= degree; ++j) {
    left[j] = t - knots[span + 1 - j];
    right[j] = knots[span + j] - t;
    double saved = 0.0;
    for (std::size_t r = 0; r < j; ++r) {
      const double temp = values[r] / (right[r + 1] + left[j - r]);
      values[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    values[j] = saved;
  }
  for (std::size_t i = 0; i <= degree; ++i) out[span - degree + i] = values[i];
}

}  // namespace

std::vector<double> evaluate_matrix(const BasisSpec& spec, const core::Grid& grid) {
  require(spec.dimension >= 1, "basis dimension must be positive");
  const std::size_t res = grid.resolution();
  std::vector<double> matrix(spec.dimension * res);
  if (spec.family == Family::fourier) {
    for (std::size_t i = 0; i < spec.dimension; ++i)
      for (std::size_t g = 0; g < res; ++g)
        matrix[i * res + g] = fourier_value(i + 1, grid.point(g));
    return matrix;
  }
  const std::size_t order = std::min<std::size_t>(4, spec.dimension);
  const std::vector<double> knots = knot_vector(spec.dimension, order);
  std::vector<double> row(spec.dimension);
  for (std::size_t g = 0; g < res; ++g) {
    bspline_row(knots, spec.dimension, order, grid.point(g), row.data());
    for (std::size_t i = 0; i < spec.dimension; ++i) matrix[i * res + g] = row[i];
  }
  return matrix;
}

std::vector<double> evaluate_at(const BasisSpec& spec, double t) {
  require(spec.dimension >= 1, "basis dimension must be positive");
  require(t >= 0.0 && t <= 1.0, "basis evaluation point must lie in [0,1]");
  std::vector<double> out(spec.dimension);
  if (spec.family == Family::fourier) {
    for (std::size_t i = 0; i < spec.dimension; ++i) out[i] = fourier_value(i + 1, t);
    return out;
  }
  const std::size_t order = std::min<std::size_t>(4, spec.dimension);
  const std::vector<double> knots = knot_vector(spec.dimension, order);
  bspline_row(knots, spec.dimension, order, t, out.data());
  return out;
}

}  // namespace fts::basis
