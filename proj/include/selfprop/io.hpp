#pragma once

// File formats: the diagnostic series CSV, legacy VTK STRUCTURED_POINTS
// snapshots, contour and radius-trajectory CSVs.

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "selfprop/contour.hpp"
#include "selfprop/diagnostics.hpp"
#include "selfprop/grid.hpp"
#include "selfprop/oracle.hpp"

namespace selfprop {

inline constexpr std::array<const char*, 16> kSeriesColumns{
    "t",      "E_s",     "E_p",     "E",     "xi",   "mu_total",  "stilde",     "mass_G",
    "phi_min", "phi_max", "u_min", "stilde_l2_accum", "area", "perimeter", "centroid_x", "centroid_y"};

/// Shortest round-trip text for a double; non-finite values print as "nan", "inf", "-inf".
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Geometry columns of a series row; NaN where no interface was extracted.
struct InterfaceSummary {
  double area = NAN;
  double perimeter = NAN;
  double centroid_x = NAN;
  double centroid_y = NAN;
};

inline InterfaceSummary summarize(const InterfaceCurve& c) {
  return {c.area, c.perimeter, c.centroid[0], c.centroid[1]};
}

struct SeriesRow {
  EnergyReport report;
  InterfaceSummary geometry;
};

inline std::vector<double> row_values(const SeriesRow& row) {
  const auto& r = row.report;
  const auto& g = row.geometry;
  return {r.t,       r.E_s,     r.E_p,   r.E,
          r.xi,      r.mu_total, r.stilde, r.mass_G,
          r.phi_min, r.phi_max, r.u_min, r.stilde_l2_accum,
          g.area,    g.perimeter, g.centroid_x, g.centroid_y};
}

/// Appends rows to series.csv, flushing each so a failed run keeps its prefix.
class SeriesWriter {
 public:
  explicit SeriesWriter(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    for (std::size_t i = 0; i < kSeriesColumns.size(); ++i) out_ << (i ? "," : "") << kSeriesColumns[i];
    out_ << '\n';
    out_.flush();
  }

  void write(const SeriesRow& row) {
    const auto v = row_values(row);
    for (std::size_t i = 0; i < v.size(); ++i) out_ << (i ? "," : "") << format_double(v[i]);
    out_ << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

inline double parse_csv_double(const std::string& s) {
  if (s == "nan") return NAN;
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("bad number '" + s + "'");
  return v;
}

/// A numeric CSV table: header names and rows of equal width.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw std::out_of_range("CSV has no column '" + name + "'");
  }

  std::vector<double> values(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
  }
};

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  t.columns = split(line);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.columns.size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": wrong number of columns");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_csv_double(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Legacy VTK STRUCTURED_POINTS, ASCII, x fastest, one SCALARS block per field.
inline void write_vtk(const std::filesystem::path& path, const std::vector<std::pair<std::string, const ScalarField*>>& fields,
                      const std::string& title = "selfprop snapshot") {
  if (fields.empty()) throw std::invalid_argument("write_vtk: no fields");
  const Grid& g = fields.front().second->grid();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << g.dims[0] << ' ' << g.dims[1] << ' ' << g.dims[2] << '\n';
  out << "ORIGIN " << format_double(0.5 * g.spacing[0]) << ' ' << format_double(0.5 * g.spacing[1]) << ' '
      << format_double(g.ndim == 3 ? 0.5 * g.spacing[2] : 0.0) << '\n';
  out << "SPACING " << format_double(g.spacing[0]) << ' ' << format_double(g.spacing[1]) << ' '
      << format_double(g.ndim == 3 ? g.spacing[2] : 1.0) << '\n';
  out << "POINT_DATA " << g.size() << '\n';
  for (const auto& [name, field] : fields) {
    if (!(field->grid() == g)) throw std::invalid_argument("write_vtk: fields on different grids");
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t c = 0; c < field->size(); ++c) out << format_double((*field)[c]) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

/// Reads a file written by write_vtk. The domain lengths are dims * spacing.
inline std::map<std::string, ScalarField> read_vtk(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  auto fail = [&](const std::string& what) -> void { throw std::runtime_error(path.string() + ": " + what); };
  std::string line;
  std::getline(in, line);
  if (line.rfind("# vtk DataFile", 0) != 0) fail("not a legacy VTK file");
  std::getline(in, line);  // title
  std::getline(in, line);
  if (line != "ASCII") fail("only ASCII files are supported");
  std::array<int, 3> dims{0, 0, 0};
  std::array<double, 3> spacing{0, 0, 0};
  std::size_t points = 0;
  std::string word;
  std::map<std::string, ScalarField> fields;
  std::optional<Grid> grid;
  while (in >> word) {
    if (word == "DATASET") {
      in >> word;
      if (word != "STRUCTURED_POINTS") fail("expected STRUCTURED_POINTS");
    } else if (word == "DIMENSIONS") {
      in >> dims[0] >> dims[1] >> dims[2];
    } else if (word == "ORIGIN") {
      double x;
      in >> x >> x >> x;
    } else if (word == "SPACING") {
      in >> spacing[0] >> spacing[1] >> spacing[2];
    } else if (word == "POINT_DATA") {
      in >> points;
      const int nd = dims[2] > 1 ? 3 : 2;
      std::vector<int> d(dims.begin(), dims.begin() + nd);
      std::vector<double> L(nd);
      for (int a = 0; a < nd; ++a) L[a] = dims[a] * spacing[a];
      grid = make_grid(d, L);
      if (grid->size() != points) fail("POINT_DATA does not match DIMENSIONS");
    } else if (word == "SCALARS") {
      if (!grid) fail("SCALARS before POINT_DATA");
      std::string name, type;
      in >> name >> type;
      std::getline(in, line);  // optional component count
      std::getline(in, line);
      if (line.rfind("LOOKUP_TABLE", 0) != 0) fail("expected LOOKUP_TABLE");
      std::vector<double> v(points);
      for (auto& x : v) {
        if (!(in >> word)) fail("truncated SCALARS block " + name);
        x = parse_csv_double(word);
      }
      fields.emplace(name, ScalarField(*grid, std::move(v)));
    } else {
      fail("unexpected token '" + word + "'");
    }
  }
  if (fields.empty()) fail("no SCALARS blocks");
  return fields;
}

/// One row per contour vertex: loop index, vertex index, x, y (unwrapped).
inline void write_contour_csv(const std::filesystem::path& path, const InterfaceCurve& curve) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "loop,vertex,x,y\n";
  for (std::size_t l = 0; l < curve.loops.size(); ++l) {
    const auto& v = curve.loops[l].vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out << l << ',' << i << ',' << format_double(v[i][0]) << ',' << format_double(v[i][1]) << '\n';
    }
  }
}

/// Reads write_contour_csv output back into loops; area and centroid are not stored.
inline InterfaceCurve read_contour_csv(const std::filesystem::path& path, const Vec2& lengths) {
  const CsvTable t = read_csv(path);
  const std::size_t cl = t.column("loop"), cx = t.column("x"), cy = t.column("y");
  InterfaceCurve curve;
  curve.lengths = lengths;
  for (const auto& r : t.rows) {
    const auto l = static_cast<std::size_t>(r[cl]);
    if (l >= curve.loops.size()) curve.loops.resize(l + 1);
    curve.loops[l].vertices.push_back({r[cx], r[cy]});
  }
  return curve;
}

inline void write_trajectory_csv(const std::filesystem::path& path, const OracleTrajectory& tr) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  const bool has_u = tr.u_at_interface.size() == tr.times.size();
  out << "t,R" << (has_u ? ",u_R" : "") << '\n';
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    out << format_double(tr.times[i]) << ',' << format_double(tr.radii[i]);
    if (has_u) out << ',' << format_double(tr.u_at_interface[i]);
    out << '\n';
  }
}

}  // namespace selfprop
