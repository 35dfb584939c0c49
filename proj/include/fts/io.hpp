#pragma once

#include <iosfwd>
#include <string>

#include "fts/grid.hpp"

namespace fts::io {

// Canonical curve CSV: header row lists the grid points, each following
// row is one curve. Values written with max precision (lossless
// round-trip). The reader also accepts long format (curve_id,t,value)
// and pivots it, requiring identical position sets per curve forming an
// equidistant grid on [0,1]. Parse errors carry 1-based line numbers.
void write_curves_csv(std::ostream& out, const core::FunctionalSample& x);
void write_curves_csv_file(const std::string& path, const core::FunctionalSample& x);
core::FunctionalSample read_curves_csv(std::istream& in, const std::string& name);
core::FunctionalSample read_curves_csv_file(const std::string& path);

// Long-format writer (curve_id,t,value), one row per sample point.
void write_long_csv(std::ostream& out, const core::FunctionalSample& x);

// Least-squares ingest: long-format observations (unit, position in
// [0,1], value) projected per unit onto the first basis_dim Fourier
// functions and evaluated on an equidistant grid. Units need at least
// basis_dim observations; offenders are listed in the error.
core::FunctionalSample ingest_project(std::istream& in, const std::string& name,
                                      std::size_t basis_dim, std::size_t resolution);

}  // namespace fts::io
