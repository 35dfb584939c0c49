#pragma once

#include <cstddef>
#include <vector>

#include "fts/grid.hpp"

namespace fts::basis {

enum class Family { fourier, bspline };

// Fourier system on [0,1]: b_1 = 1; b_j = sqrt(2) sin(j pi t) for even j;
// b_j = sqrt(2) cos((j-1) pi t) for odd j > 1. Orthonormal.
double fourier_value(std::size_t j, double t);

struct BasisSpec {
  Family family = Family::bspline;
  std::size_t dimension = 21;
};

// Row-major dimension x resolution matrix of basis values on the grid.
// B-splines: equidistant clamped knots, order min(4, dimension).
std::vector<double> evaluate_matrix(const BasisSpec& spec, const core::Grid& grid);

// Basis values at a single point (used by the ingest projection).
std::vector<double> evaluate_at(const BasisSpec& spec, double t);

}  // namespace fts::basis
