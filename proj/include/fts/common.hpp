#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace fts {

// Violated mathematical precondition (bad delta, mismatched grids, ...).
// The CLI maps this to exit code 4.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed external input (CSV/JSON parse failures, missing columns, ...).
// The CLI maps this to exit code 3.
class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// floor(x) with a snap to the nearest integer when x sits within 1e-9
// (relative) of one. Cutoff products such as 20 * 0.35 evaluate to
// 6.999...96 in binary; the exact-rational floor is wanted everywhere.
inline std::ptrdiff_t floor_index(double x) {
  const double r = std::nearbyint(x);
  const double scale = std::fmax(1.0, std::fabs(x));
  if (std::fabs(x - r) <= 1e-9 * scale) return static_cast<std::ptrdiff_t>(r);
  return static_cast<std::ptrdiff_t>(std::floor(x));
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw precondition_error(msg);
}

}  // namespace fts
