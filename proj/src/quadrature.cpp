#include "gfnet/quadrature.hpp"

#include <cmath>

#include "gfnet/error.hpp"

namespace gfnet {

const TriQuadRule& triangle_rule() {
  static const TriQuadRule rule{
      {{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, {0.6, 0.2, 0.2}, {0.2, 0.6, 0.2}, {0.2, 0.2, 0.6}}},
      {-27.0 / 48.0, 25.0 / 48.0, 25.0 / 48.0, 25.0 / 48.0}};
  return rule;
}

const EdgeQuadRule& edge_rule() {
  static const EdgeQuadRule rule = [] {
    const double d = 0.5 * std::sqrt(0.6);
    return EdgeQuadRule{{0.5 - d, 0.5, 0.5 + d}, {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0}};
  }();
  return rule;
}

std::array<Point2, 4> map_points(const TriQuadRule& rule, Point2 a, Point2 b, Point2 c) {
  std::array<Point2, 4> out;
  for (std::size_t q = 0; q < 4; ++q) {
    const auto& l = rule.bary[q];
    out[q] = {l[0] * a.x1 + l[1] * b.x1 + l[2] * c.x1, l[0] * a.x2 + l[1] * b.x2 + l[2] * c.x2};
  }
  return out;
}

std::array<Point2, 3> map_points(const EdgeQuadRule& rule, Point2 a, Point2 b) {
  std::array<Point2, 3> out;
  for (std::size_t q = 0; q < 3; ++q) out[q] = a + rule.t[q] * (b - a);
  return out;
}

double tri_quad(const TriQuadRule& rule, Point2 a, Point2 b, Point2 c, const std::function<double(Point2)>& f) {
  const double area = std::abs(signed_area(a, b, c));
  if (!(area > 0.0)) throw Error(ErrorKind::degenerate_triangle, "triangle has zero area");
  const auto pts = map_points(rule, a, b, c);
  double sum = 0.0;
  for (std::size_t q = 0; q < 4; ++q) sum += rule.weight[q] * f(pts[q]);
  return area * sum;
}

double edge_quad(const EdgeQuadRule& rule, Point2 a, Point2 b, const std::function<double(Point2)>& f) {
  const double len = norm(b - a);
  if (!(len > 0.0)) throw Error(ErrorKind::zero_length_edge, "edge endpoints coincide");
  const auto pts = map_points(rule, a, b);
  double sum = 0.0;
  for (std::size_t q = 0; q < 3; ++q) sum += rule.weight[q] * f(pts[q]);
  return len * sum;
}

}  // namespace gfnet
