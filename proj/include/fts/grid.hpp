#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fts/common.hpp"

namespace fts::core {

// Equidistant evaluation grid on [0,1], first point 0, last point 1.
// Immutable and shared between curves; samples compare grids by pointer
// first and by content as a fallback.
class Grid {
 public:
  static std::shared_ptr<const Grid> regular(std::size_t resolution);

  std::size_t resolution() const { return points_.size(); }
  double point(std::size_t i) const { return points_[i]; }
  std::span<const double> points() const { return points_; }
  double step() const { return step_; }

  // Trapezoidal quadrature weights: h/2 at both endpoints, h inside.
  std::span<const double> quad_weights() const { return weights_; }

  bool same_as(const Grid& other) const;

 private:
  explicit Grid(std::size_t resolution);
  std::vector<double> points_;
  std::vector<double> weights_;
  double step_ = 0.0;
};

using GridPtr = std::shared_ptr<const Grid>;

void require_same_grid(const Grid& a, const Grid& b);

// One function sampled on a grid. Value semantics; the grid is shared.
class Curve {
 public:
  Curve(GridPtr grid, std::vector<double> values);
  static Curve zero(GridPtr grid);

  const GridPtr& grid() const { return grid_; }
  std::size_t resolution() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

// n curves on a common grid, stored row-major (curve index major).
class FunctionalSample {
 public:
  FunctionalSample(GridPtr grid, std::size_t n_curves);
  FunctionalSample(GridPtr grid, std::size_t n_curves, std::vector<double> data);

  std::size_t size() const { return n_; }
  std::size_t resolution() const { return grid_->resolution(); }
  const GridPtr& grid() const { return grid_; }

  std::span<const double> curve(std::size_t j) const;
  std::span<double> curve(std::size_t j);
  Curve curve_copy(std::size_t j) const;

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  // Sub-sample of curves [lo, hi) preserving order.
  FunctionalSample slice(std::size_t lo, std::size_t hi) const;

 private:
  GridPtr grid_;
  std::size_t n_;
  std::vector<double> data_;
};

// A kernel K(s,t) on grid x grid, row-major in s.
class Surface {
 public:
  Surface(GridPtr grid, std::vector<double> values);
  static Surface zero(GridPtr grid);

  const GridPtr& grid() const { return grid_; }
  std::size_t resolution() const { return grid_->resolution(); }
  double at(std::size_t i, std::size_t j) const { return values_[i * grid_->resolution() + j]; }
  double& at(std::size_t i, std::size_t j) { return values_[i * grid_->resolution() + j]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

}  // namespace fts::core
