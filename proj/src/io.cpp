#include "fts/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "fts/basis.hpp"
#include "fts/common.hpp"

namespace fts::io {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail(const std::string& name, std::size_t line, const std::string& what) {
  throw data_error(name + ": line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_fields(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string field = line.substr(start, comma == std::string::npos ? comma : comma - start);
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!field.empty() && is_space(field.front())) field.erase(field.begin());
    while (!field.empty() && is_space(field.back())) field.pop_back();
    fields.push_back(std::move(field));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool parse_double(const std::string& field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && !field.empty();
}

double parse_double_or_fail(const std::string& field, const std::string& name,
                            std::size_t line, const char* what) {
  double v = 0.0;
  if (!parse_double(field, v)) fail(name, line, std::string("expected a number for ") + what);
  return v;
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Positions must form the equidistant grid on [0,1] the library computes
// on (first point 0, last point 1); anything else cannot round-trip.
core::GridPtr grid_from_points(const std::vector<double>& points, const std::string& name,
                               std::size_t line) {
  if (points.size() < 2) fail(name, line, "a grid needs at least 2 points");
  const auto res = points.size();
  const double step = 1.0 / static_cast<double>(res - 1);
  for (std::size_t i = 0; i < res; ++i) {
    const double expected = static_cast<double>(i) * step;
    if (std::fabs(points[i] - expected) > 1e-9)
      fail(name, line,
           "positions do not form an equidistant grid on [0,1] (point " +
               std::to_string(i + 1) + " is " + fmt(points[i]) + ", expected " +
               fmt(expected) + ")");
  }
  return core::Grid::regular(res);
}

struct Row {
  std::size_t line;
  std::vector<std::string> fields;
};

// Reads non-blank lines with their 1-based line numbers.
std::vector<Row> read_rows(std::istream& in) {
  std::vector<Row> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back({number, split_fields(line)});
  }
  return rows;
}

core::FunctionalSample pivot_long(const std::vector<Row>& rows, const std::string& name) {
  struct CurveBuild {
    std::vector<double> positions;
    std::vector<double> values;
    std::size_t first_line = 0;
  };
  std::vector<std::pair<std::string, CurveBuild>> curves;  // first-appearance order
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != 3)
      fail(name, row.line, "expected 3 fields (curve_id,t,value), got " +
                               std::to_string(row.fields.size()));
    const double t = parse_double_or_fail(row.fields[1], name, row.line, "t");
    const double value = parse_double_or_fail(row.fields[2], name, row.line, "value");
    auto it = std::find_if(curves.begin(), curves.end(),
                           [&](const auto& c) { return c.first == row.fields[0]; });
    if (it == curves.end()) {
      curves.push_back({row.fields[0], CurveBuild{{}, {}, row.line}});
      it = std::prev(curves.end());
    }
    it->second.positions.push_back(t);
    it->second.values.push_back(value);
  }
  if (curves.empty()) throw data_error(name + ": no data rows");

  const auto& first = curves.front().second;
  const auto grid = grid_from_points(first.positions, name, first.first_line);
  core::FunctionalSample sample(grid, curves.size());
  for (std::size_t j = 0; j < curves.size(); ++j) {
    const auto& [id, build] = curves[j];
    if (build.positions.size() != first.positions.size())
      fail(name, build.first_line,
           "curve '" + id + "' has " + std::to_string(build.positions.size()) +
               " points, expected " + std::to_string(first.positions.size()));
    for (std::size_t g = 0; g < build.positions.size(); ++g)
      if (std::fabs(build.positions[g] - grid->point(g)) > 1e-9)
        fail(name, build.first_line,
             "curve '" + id + "' positions do not match the first curve's grid");
    auto out = sample.curve(j);
    std::copy(build.values.begin(), build.values.end(), out.begin());
  }
  return sample;
}

}  // namespace

void write_curves_csv(std::ostream& out, const core::FunctionalSample& x) {
  const auto& grid = *x.grid();
  for (std::size_t g = 0; g < grid.resolution(); ++g) {
    if (g) out << ',';
    out << fmt(grid.point(g));
  }
  out << '\n';
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto row = x.curve(j);
    for (std::size_t g = 0; g < row.size(); ++g) {
      if (g) out << ',';
      out << fmt(row[g]);
    }
    out << '\n';
  }
}

void write_curves_csv_file(const std::string& path, const core::FunctionalSample& x) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open for writing: " + path);
  write_curves_csv(out, x);
  out.flush();
  if (!out) throw data_error("write failed: " + path);
}

core::FunctionalSample read_curves_csv(std::istream& in, const std::string& name) {
  const auto rows = read_rows(in);
  if (rows.empty()) throw data_error(name + ": empty input");

  const auto& header = rows.front();
  double probe = 0.0;
  if (!parse_double(header.fields[0], probe)) {
    // Non-numeric header: the long format (curve_id,t,value).
    if (header.fields.size() != 3 || lowercase(header.fields[0]) != "curve_id" ||
        lowercase(header.fields[1]) != "t" || lowercase(header.fields[2]) != "value")
      fail(name, header.line,
           "unrecognized header; expected grid points or curve_id,t,value");
    return pivot_long(rows, name);
  }

  std::vector<double> points(header.fields.size());
  for (std::size_t g = 0; g < points.size(); ++g)
    points[g] = parse_double_or_fail(header.fields[g], name, header.line, "grid point");
  const auto grid = grid_from_points(points, name, header.line);

  core::FunctionalSample sample(grid, rows.size() - 1);
  for (std::size_t j = 1; j < rows.size(); ++j) {
    const auto& row = rows[j];
    if (row.fields.size() != points.size())
      fail(name, row.line, "expected " + std::to_string(points.size()) + " values, got " +
                               std::to_string(row.fields.size()));
    auto out = sample.curve(j - 1);
    for (std::size_t g = 0; g < points.size(); ++g)
      out[g] = parse_double_or_fail(row.fields[g], name, row.line, "curve value");
  }
  return sample;
}

core::FunctionalSample read_curves_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open: " + path);
  return read_curves_csv(in, path);
}

void write_long_csv(std::ostream& out, const core::FunctionalSample& x) {
  out << "curve_id,t,value\n";
  const auto& grid = *x.grid();
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto row = x.curve(j);
    for (std::size_t g = 0; g < row.size(); ++g)
      out << (j + 1) << ',' << fmt(grid.point(g)) << ',' << fmt(row[g]) << '\n';
  }
}

core::FunctionalSample ingest_project(std::istream& in, const std::string& name,
                                      std::size_t basis_dim, std::size_t resolution) {
  require(basis_dim >= 1, "projection needs at least one basis function");
  require(resolution >= 2, "projection needs a grid of at least 2 points");
  const auto rows = read_rows(in);
  if (rows.empty()) throw data_error(name + ": empty input");

  struct UnitBuild {
    std::vector<double> positions;
    std::vector<double> values;
  };
  std::vector<std::pair<std::string, UnitBuild>> units;  // first-appearance order
  for (const auto& row : rows) {
    if (row.fields.size() != 3)
      fail(name, row.line, "expected 3 fields (unit_id,position,value), got " +
                               std::to_string(row.fields.size()));
    double probe = 0.0;
    const bool header_like = !parse_double(row.fields[1], probe);
    if (header_like && &row == &rows.front()) continue;
    const double t = parse_double_or_fail(row.fields[1], name, row.line, "position");
    const double value = parse_double_or_fail(row.fields[2], name, row.line, "value");
    if (t < 0.0 || t > 1.0) fail(name, row.line, "position outside [0,1]: " + fmt(t));
    auto it = std::find_if(units.begin(), units.end(),
                           [&](const auto& u) { return u.first == row.fields[0]; });
    if (it == units.end()) {
      units.push_back({row.fields[0], UnitBuild{}});
      it = std::prev(units.end());
    }
    it->second.positions.push_back(t);
    it->second.values.push_back(value);
  }
  if (units.empty()) throw data_error(name + ": no data rows");

  std::string starved;
  for (const auto& [id, build] : units)
    if (build.positions.size() < basis_dim) starved += (starved.empty() ? "" : ", ") + id;
  if (!starved.empty())
    throw data_error(name + ": units with fewer than " + std::to_string(basis_dim) +
                     " observations: " + starved);

  const basis::BasisSpec fourier{basis::Family::fourier, basis_dim};
  const auto grid = core::Grid::regular(resolution);
  const auto matrix = basis::evaluate_matrix(fourier, *grid);  // basis_dim x resolution

  core::FunctionalSample sample(grid, units.size());
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto& build = units[u].second;
    const auto obs = static_cast<Eigen::Index>(build.positions.size());
    const auto dim = static_cast<Eigen::Index>(basis_dim);
    Eigen::MatrixXd design(obs, dim);
    for (Eigen::Index r = 0; r < obs; ++r) {
      const auto row_values = basis::evaluate_at(fourier, build.positions[static_cast<std::size_t>(r)]);
      for (Eigen::Index c = 0; c < dim; ++c)
        design(r, c) = row_values[static_cast<std::size_t>(c)];
    }
    const Eigen::VectorXd y =
        Eigen::Map<const Eigen::VectorXd>(build.values.data(), obs);
    const Eigen::VectorXd coeffs = design.colPivHouseholderQr().solve(y);
    auto out = sample.curve(u);
    for (std::size_t g = 0; g < grid->resolution(); ++g) {
      double acc = 0.0;
      for (std::size_t c = 0; c < basis_dim; ++c)
        acc += coeffs(static_cast<Eigen::Index>(c)) * matrix[c * grid->resolution() + g];
      out[g] = acc;
    }
  }
  return sample;
}

}  // namespace fts::io
