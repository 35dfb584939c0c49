#include "fts/grid.hpp"

#include <algorithm>
#include <cmath>

namespace fts::core {

Grid::Grid(std::size_t resolution) {
  require(resolution >= 2, "grid resolution must be at least 2");
  points_.resize(resolution);
  weights_.resize(resolution);
  step_ = 1.0 / static_cast<double>(resolution - 1);
  for (std::size_t i = 0; i < resolution; ++i) {
    points_[i] = static_cast<double>(i) * step_;
    weights_[i] = step_;
  }
  points_.front() = 0.0;
  points_.back() = 1.0;
  weights_.front() = step_ / 2.0;
  weights_.back() = step_ / 2.0;
}

std::shared_ptr<const Grid> Grid::regular(std::size_t resolution) {
  return std::shared_ptr<const Grid>(new Grid(resolution));
}

bool Grid::same_as(const Grid& other) const {
  if (this == &other) return true;
  return points_ == other.points_;
}

void require_same_grid(const Grid& a, const Grid& b) {
  require(a.same_as(b), "curves must share one evaluation grid");
}

Curve::Curve(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  require(grid_ != nullptr, "curve needs a grid");
  require(values_.size() == grid_->resolution(),
          "curve length must match grid resolution");
}

Curve Curve::zero(GridPtr grid) {
  require(grid != nullptr, "curve needs a grid");
  std::vector<double> v(grid->resolution(), 0.0);
  return Curve(std::move(grid), std::move(v));
}

FunctionalSample::FunctionalSample(GridPtr grid, std::size_t n_curves)
    : grid_(std::move(grid)), n_(n_curves) {
  require(grid_ != nullptr, "sample needs a grid");
  data_.assign(n_ * grid_->resolution(), 0.0);
}

FunctionalSample::FunctionalSample(GridPtr grid, std::size_t n_curves,
                                   std::vector<double> data)
    : grid_(std::move(grid)), n_(n_curves), data_(std::move(data)) {
  require(grid_ != nullptr, "sample needs a grid");
  require(data_.size() == n_ * grid_->resolution(),
          "sample data size must be n_curves * resolution");
}

std::span<const double> FunctionalSample::curve(std::size_t j) const {
  require(j < n_, "curve index out of range");
  const std::size_t res = grid_->resolution();
  return {data_.data() + j * res, res};
}

std::span<double> FunctionalSample::curve(std::size_t j) {
  require(j < n_, "curve index out of range");
  const std::size_t res = grid_->resolution();
  return {data_.data() + j * res, res};
}

Curve FunctionalSample::curve_copy(std::size_t j) const {
  auto v = curve(j);
  return Curve(grid_, std::vector<double>(v.begin(), v.end()));
}

FunctionalSample FunctionalSample::slice(std::size_t lo, std::size_t hi) const {
  require(lo <= hi && hi <= n_, "invalid slice bounds");
  const std::size_t res = grid_->resolution();
  std::vector<double> data(data_.begin() + lo * res, data_.begin() + hi * res);
  return FunctionalSample(grid_, hi - lo, std::move(data));
}

Surface::Surface(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  require(grid_ != nullptr, "surface needs a grid");
  const std::size_t res = grid_->resolution();
  require(values_.size() == res * res, "surface size must be resolution^2");
}

Surface Surface::zero(GridPtr grid) {
  require(grid != nullptr, "surface needs a grid");
  const std::size_t res = grid->resolution();
  std::vector<double> v(res * res, 0.0);
  return Surface(std::move(grid), std::move(v));
}

}  // namespace fts::core
