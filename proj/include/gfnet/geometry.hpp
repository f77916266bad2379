#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gfnet {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x1, s * a.x2}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double norm(Point2 a) { return std::hypot(a.x1, a.x2); }
inline double norm_inf(Point2 a) { return std::max(std::abs(a.x1), std::abs(a.x2)); }

/// Twice the signed area of (a, b, c); positive when counterclockwise.
inline double cross(Point2 a, Point2 b, Point2 c) {
  return (b.x1 - a.x1) * (c.x2 - a.x2) - (b.x2 - a.x2) * (c.x1 - a.x1);
}
inline double signed_area(Point2 a, Point2 b, Point2 c) { return 0.5 * cross(a, b, c); }

struct Rect {
  double x1_min = 0.0, x1_max = 0.0;
  double x2_min = 0.0, x2_max = 0.0;

  double width() const { return x1_max - x1_min; }
  double height() const { return x2_max - x2_min; }
  bool contains(Point2 p) const {
    return p.x1 >= x1_min && p.x1 <= x1_max && p.x2 >= x2_min && p.x2 <= x2_max;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

enum class DomainKind { square, disk, annulus, lshape };

std::string_view to_string(DomainKind kind);
/// Throws Error(unknown_name) for anything but square|disk|annulus|lshape.
DomainKind parse_domain_kind(std::string_view name);

struct DomainParams {
  double half_width = 1.0;    // square and L-shape: [-half_width, half_width]^2
  double radius = 1.0;        // disk radius, annulus outer radius
  double inner_radius = 0.5;  // annulus only
};

/// One of the four benchmark domains. Immutable after construction.
///
/// The L-shape is [-w, w]^2 with the closed quadrant [0, w]^2 removed.
class Domain {
 public:
  Domain() = default;
  Domain(DomainKind kind, DomainParams params);

  DomainKind kind() const { return kind_; }
  const DomainParams& params() const { return params_; }

  /// Negative inside, zero on the boundary, positive outside.
  double signed_distance(Point2 p) const;
  Rect bounding_box() const;
  /// Outward unit normal at (or nearest to) a boundary point.
  Point2 boundary_normal(Point2 p) const;
  double area() const;
  bool contains_interior(Point2 p) const { return signed_distance(p) < 0.0; }

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.kind_ == b.kind_ && a.params_.half_width == b.params_.half_width &&
           a.params_.radius == b.params_.radius && a.params_.inner_radius == b.params_.inner_radius;
  }

 private:
  DomainKind kind_ = DomainKind::square;
  DomainParams params_;
};

Domain make_domain(DomainKind kind, const DomainParams& params = {});

struct BoundaryEdge {
  std::array<int, 2> v{};  // oriented counterclockwise with respect to the domain
  Point2 normal;           // outward unit normal of the straight edge
};

struct TriMesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<bool> is_boundary_vertex;
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<double> dual_area;

  std::size_t interior_count() const;
  double total_area() const;
};

/// Deterministic structured mesh: a split uniform grid for square and L-shape,
/// concentric rings for disk and annulus. Boundary vertices on curved
/// boundaries lie exactly on the circle.
TriMesh generate_mesh(const Domain& domain, double target_h);

/// Builds boundary edges, boundary flags and dual areas from vertices and
/// triangles. Throws Error(degenerate_triangle) on non-positive areas.
TriMesh finalize_mesh(std::vector<Point2> vertices, std::vector<std::array<int, 3>> triangles);

/// Barycentric dual: one third of the area of every incident triangle.
std::vector<double> dual_areas(const TriMesh& mesh);

std::vector<int> interior_vertex_indices(const TriMesh& mesh);

}  // namespace gfnet
