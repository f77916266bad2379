#include "gfnet/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gfnet/error.hpp"
#include "gfnet/text_io.hpp"

namespace gfnet {

std::vector<FieldPoint> read_field_table(std::istream& in) {
  std::vector<FieldPoint> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line.find('=') != std::string::npos) continue;
    std::istringstream row(line);
    std::array<std::string, 3> tok;
    if (!(row >> tok[0] >> tok[1] >> tok[2]))
      throw Error(ErrorKind::parse_failure, "line " + std::to_string(number) + ": expected x1 x2 value");
    try {
      out.push_back({{parse_double(tok[0]), parse_double(tok[1])}, parse_double(tok[2])});
    } catch (const Error&) {
      throw Error(ErrorKind::parse_failure, "line " + std::to_string(number) + ": not numeric");
    }
  }
  if (out.empty()) throw Error(ErrorKind::empty_sample_set, "table has no data rows");
  return out;
}

void write_field_csv(std::ostream& out, const std::vector<FieldPoint>& field) {
  out << "x1,x2,value\n";
  for (const auto& p : field)
    out << format_double(p.x.x1) << ',' << format_double(p.x.x2) << ',' << format_double(p.value) << '\n';
}

namespace {

// Piecewise-linear approximation of the viridis map.
std::string colour(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops{
      {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const auto i = static_cast<std::size_t>(std::min(3.0, std::floor(t)));
  const double f = t - static_cast<double>(i);
  char buf[8];
  std::array<int, 3> c{};
  for (std::size_t k = 0; k < 3; ++k) c[k] = static_cast<int>(std::lround(stops[i][k] + f * (stops[i + 1][k] - stops[i][k])));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

}  // namespace

void write_field_svg(std::ostream& out, const std::vector<FieldPoint>& field) {
  if (field.empty()) throw Error(ErrorKind::empty_sample_set, "nothing to plot");
  double x0 = field[0].x.x1, x1 = x0, y0 = field[0].x.x2, y1 = y0, lo = field[0].value, hi = lo;
  for (const auto& p : field) {
    x0 = std::min(x0, p.x.x1);
    x1 = std::max(x1, p.x.x1);
    y0 = std::min(y0, p.x.x2);
    y1 = std::max(y1, p.x.x2);
    lo = std::min(lo, p.value);
    hi = std::max(hi, p.value);
  }
  // Cell size: smallest positive coordinate gap.
  std::vector<double> xs;
  for (const auto& p : field) xs.push_back(p.x.x1);
  std::sort(xs.begin(), xs.end());
  double cell = std::max(x1 - x0, y1 - y0);
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] - xs[i - 1] > 1e-12) cell = std::min(cell, xs[i] - xs[i - 1]);
  if (!(cell > 0.0)) cell = 1.0;
  const double scale = 400.0 / std::max({x1 - x0 + cell, y1 - y0 + cell, 1e-12});
  const double w = (x1 - x0 + cell) * scale, h = (y1 - y0 + cell) * scale;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  const double span = hi > lo ? hi - lo : 1.0;
  for (const auto& p : field) {
    const double px = (p.x.x1 - x0) * scale, py = (y1 - p.x.x2) * scale;
    out << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << cell * scale + 0.5 << "\" height=\""
        << cell * scale + 0.5 << "\" fill=\"" << colour((p.value - lo) / span) << "\"/>\n";
  }
  out << "</svg>\n";
}

std::vector<Point2> lattice_points(const Domain& domain, int n) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "lattice needs at least 2 points per side");
  const Rect box = domain.bounding_box();
  std::vector<Point2> out;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Point2 p{box.x1_min + box.width() * i / (n - 1), box.x2_min + box.height() * j / (n - 1)};
      if (domain.signed_distance(p) <= 1e-12) out.push_back(p);
    }
  }
  return out;
}

}  // namespace gfnet
