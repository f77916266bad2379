#pragma once

#include <array>
#include <functional>

#include "gfnet/geometry.hpp"

namespace gfnet {

/// Barycentric points and weights relative to the triangle area.
struct TriQuadRule {
  std::array<std::array<double, 3>, 4> bary;
  std::array<double, 4> weight;
};

/// Points in [0, 1] along a segment, weights relative to its length.
struct EdgeQuadRule {
  std::array<double, 3> t;
  std::array<double, 3> weight;
};

/// Four-point rule exact for cubics: centroid with weight -27/48 and the
/// points (0.6, 0.2, 0.2) up to permutation with weight 25/48.
const TriQuadRule& triangle_rule();
/// Three-point Gauss-Legendre rule, exact for quintics.
const EdgeQuadRule& edge_rule();

/// Triangle quadrature points in physical coordinates.
std::array<Point2, 4> map_points(const TriQuadRule& rule, Point2 a, Point2 b, Point2 c);
std::array<Point2, 3> map_points(const EdgeQuadRule& rule, Point2 a, Point2 b);

/// Throws Error(degenerate_triangle) unless the triangle has positive area
/// (either orientation).
double tri_quad(const TriQuadRule& rule, Point2 a, Point2 b, Point2 c, const std::function<double(Point2)>& f);
/// Throws Error(zero_length_edge) when a == b.
double edge_quad(const EdgeQuadRule& rule, Point2 a, Point2 b, const std::function<double(Point2)>& f);

}  // namespace gfnet
