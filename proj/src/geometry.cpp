#include "gfnet/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "gfnet/error.hpp"

namespace gfnet {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_geometry: return "invalid-geometry";
    case ErrorKind::meshing_failure: return "meshing-failure";
    case ErrorKind::degenerate_triangle: return "degenerate-triangle";
    case ErrorKind::zero_length_edge: return "zero-length-edge";
    case ErrorKind::empty_sample_set: return "empty-sample-set";
    case ErrorKind::degenerate_sampling: return "degenerate-sampling";
    case ErrorKind::empty_partition: return "empty-partition";
    case ErrorKind::unknown_name: return "unknown-name";
    case ErrorKind::singular_point: return "singular-point";
    case ErrorKind::unoccupied_block: return "unoccupied-block";
    case ErrorKind::zero_denominator: return "zero-denominator";
    case ErrorKind::parse_failure: return "parse-failure";
    case ErrorKind::domain_mismatch: return "domain-mismatch";
    case ErrorKind::cg_nonconvergence: return "cg-nonconvergence";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::io_failure: return "io-failure";
    case ErrorKind::training_failure: return "training-failure";
  }
  return "error";
}

std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::square: return "square";
    case DomainKind::disk: return "disk";
    case DomainKind::annulus: return "annulus";
    case DomainKind::lshape: return "lshape";
  }
  return "?";
}

DomainKind parse_domain_kind(std::string_view name) {
  if (name == "square") return DomainKind::square;
  if (name == "disk") return DomainKind::disk;
  if (name == "annulus") return DomainKind::annulus;
  if (name == "lshape") return DomainKind::lshape;
  throw Error(ErrorKind::unknown_name, "unknown domain '" + std::string(name) + "'");
}

namespace {

// Counterclockwise outline of the L-shape.
std::array<Point2, 6> lshape_outline(double w) {
  return {Point2{-w, -w}, Point2{w, -w}, Point2{w, 0.0},
          Point2{0.0, 0.0}, Point2{0.0, w}, Point2{-w, w}};
}

double segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double t = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
  return norm(p - (a + t * ab));
}

bool polygon_contains(std::span<const Point2> poly, Point2 p) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2 a = poly[i], b = poly[j];
    if ((a.x2 > p.x2) != (b.x2 > p.x2)) {
      const double x = a.x1 + (p.x2 - a.x2) * (b.x1 - a.x1) / (b.x2 - a.x2);
      if (p.x1 < x) inside = !inside;
    }
  }
  return inside;
}

double sign_or_one(double v) { return v < 0.0 ? -1.0 : 1.0; }

}  // namespace

Domain::Domain(DomainKind kind, DomainParams params) : kind_(kind), params_(params) {
  switch (kind) {
    case DomainKind::square:
    case DomainKind::lshape:
      if (!(params.half_width > 0.0) || !std::isfinite(params.half_width))
        throw Error(ErrorKind::invalid_geometry, "half_width must be positive");
      break;
    case DomainKind::disk:
      if (!(params.radius > 0.0) || !std::isfinite(params.radius))
        throw Error(ErrorKind::invalid_geometry, "radius must be positive");
      break;
    case DomainKind::annulus:
      if (!(params.inner_radius > 0.0) || !(params.radius > params.inner_radius) ||
          !std::isfinite(params.radius))
        throw Error(ErrorKind::invalid_geometry, "annulus needs 0 < inner_radius < radius");
      break;
  }
}

Domain make_domain(DomainKind kind, const DomainParams& params) { return Domain(kind, params); }

double Domain::signed_distance(Point2 p) const {
  switch (kind_) {
    case DomainKind::square: {
      const double w = params_.half_width;
      const double qx = std::abs(p.x1) - w, qy = std::abs(p.x2) - w;
      const double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
      return outside + std::min(std::max(qx, qy), 0.0);
    }
    case DomainKind::disk:
      return norm(p) - params_.radius;
    case DomainKind::annulus: {
      const double r = norm(p);
      return std::max(r - params_.radius, params_.inner_radius - r);
    }
    case DomainKind::lshape: {
      const auto poly = lshape_outline(params_.half_width);
      double d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < poly.size(); ++i)
        d = std::min(d, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
      if (d == 0.0) return 0.0;
      return polygon_contains(poly, p) ? -d : d;
    }
  }
  return 0.0;
}

Rect Domain::bounding_box() const {
  const double e = (kind_ == DomainKind::square || kind_ == DomainKind::lshape) ? params_.half_width
                                                                              : params_.radius;
  return {-e, e, -e, e};
}

Point2 Domain::boundary_normal(Point2 p) const {
  switch (kind_) {
    case DomainKind::square:
      if (std::abs(p.x1) >= std::abs(p.x2)) return {sign_or_one(p.x1), 0.0};
      return {0.0, sign_or_one(p.x2)};
    case DomainKind::disk: {
      const double r = norm(p);
      return r > 0.0 ? (1.0 / r) * p : Point2{1.0, 0.0};
    }
    case DomainKind::annulus: {
      const double r = norm(p);
      if (r == 0.0) return {-1.0, 0.0};
      const bool inner = std::abs(r - params_.inner_radius) < std::abs(r - params_.radius);
      return (inner ? -1.0 / r : 1.0 / r) * p;
    }
    case DomainKind::lshape: {
      const auto poly = lshape_outline(params_.half_width);
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const double d = segment_distance(p, poly[i], poly[(i + 1) % poly.size()]);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      const Point2 e = poly[(best + 1) % poly.size()] - poly[best];
      return (1.0 / norm(e)) * Point2{e.x2, -e.x1};
    }
  }
  return {};
}

double Domain::area() const {
  const double pi = std::numbers::pi;
  switch (kind_) {
    case DomainKind::square: return 4.0 * params_.half_width * params_.half_width;
    case DomainKind::lshape: return 3.0 * params_.half_width * params_.half_width;
    case DomainKind::disk: return pi * params_.radius * params_.radius;
    case DomainKind::annulus:
      return pi * (params_.radius * params_.radius - params_.inner_radius * params_.inner_radius);
  }
  return 0.0;
}

std::size_t TriMesh::interior_count() const {
  return static_cast<std::size_t>(std::count(is_boundary_vertex.begin(), is_boundary_vertex.end(), false));
}

double TriMesh::total_area() const {
  double a = 0.0;
  for (const auto& t : triangles) a += signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
  return a;
}

std::vector<double> dual_areas(const TriMesh& mesh) {
  std::vector<double> area(mesh.vertices.size(), 0.0);
  for (const auto& t : mesh.triangles) {
    const double third =
        signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) / 3.0;
    for (int v : t) area[v] += third;
  }
  return area;
}

std::vector<int> interior_vertex_indices(const TriMesh& mesh) {
  std::vector<int> out;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    if (!mesh.is_boundary_vertex[i]) out.push_back(static_cast<int>(i));
  return out;
}

TriMesh finalize_mesh(std::vector<Point2> vertices, std::vector<std::array<int, 3>> triangles) {
  TriMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  const auto nv = static_cast<std::int64_t>(mesh.vertices.size());

  auto key = [nv](int a, int b) {
    return static_cast<std::int64_t>(std::min(a, b)) * nv + std::max(a, b);
  };
  std::unordered_map<std::int64_t, int> uses;
  for (const auto& t : mesh.triangles) {
    for (int v : t)
      if (v < 0 || v >= nv) throw Error(ErrorKind::meshing_failure, "triangle index out of range");
    if (!(signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) > 0.0))
      throw Error(ErrorKind::degenerate_triangle, "triangle with non-positive area");
    for (int e = 0; e < 3; ++e) ++uses[key(t[e], t[(e + 1) % 3])];
  }
  for (const auto& [k, n] : uses)
    if (n > 2) throw Error(ErrorKind::meshing_failure, "edge shared by more than two triangles");

  mesh.is_boundary_vertex.assign(mesh.vertices.size(), false);
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      if (uses[key(a, b)] != 1) continue;
      const Point2 d = mesh.vertices[b] - mesh.vertices[a];
      const double len = norm(d);
      mesh.boundary_edges.push_back({{a, b}, (1.0 / len) * Point2{d.x2, -d.x1}});
      mesh.is_boundary_vertex[a] = true;
      mesh.is_boundary_vertex[b] = true;
    }
  }
  mesh.dual_area = dual_areas(mesh);
  return mesh;
}

namespace {

int cells_for(double extent, double h) {
  return std::max(1, static_cast<int>(std::ceil(extent / h - 1e-9)));
}

// Grid over [-w, w]^2 with N cells per side; cells for which keep(i, j) is
// false are dropped and unreferenced vertices removed.
template <class Keep>
TriMesh grid_mesh(double w, int n, Keep keep) {
  const int stride = n + 1;
  std::vector<int> index(static_cast<std::size_t>(stride * stride), -1);
  auto coord = [&](int i) { return -w + 2.0 * w * i / n; };
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  auto vertex = [&](int i, int j) {
    int& slot = index[static_cast<std::size_t>(j * stride + i)];
    if (slot < 0) {
      slot = static_cast<int>(vertices.size());
      vertices.push_back({coord(i), coord(j)});
    }
    return slot;
  };
  // Vertices are numbered row by row so that ordering is independent of
  // which cells survive.
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const bool used = (i > 0 && j > 0 && keep(i - 1, j - 1)) || (i < n && j > 0 && keep(i, j - 1)) ||
                        (i > 0 && j < n && keep(i - 1, j)) || (i < n && j < n && keep(i, j));
      if (used) vertex(i, j);
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!keep(i, j)) continue;
      const int v00 = vertex(i, j), v10 = vertex(i + 1, j), v11 = vertex(i + 1, j + 1),
                v01 = vertex(i, j + 1);
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  return finalize_mesh(std::move(vertices), std::move(triangles));
}

// Triangulates the strip between two concentric rings whose vertices start at
// angle zero and are equally spaced.
void stitch_rings(int inner_start, int n_inner, int outer_start, int n_outer,
                  std::vector<std::array<int, 3>>& triangles) {
  int i = 0, k = 0;
  while (i < n_inner || k < n_outer) {
    const int a = inner_start + i % n_inner, a_next = inner_start + (i + 1) % n_inner;
    const int b = outer_start + k % n_outer, b_next = outer_start + (k + 1) % n_outer;
    // Compare the angles of the next vertices exactly: (i+1)/n_inner vs (k+1)/n_outer.
    const bool advance_inner =
        k == n_outer || (i < n_inner && static_cast<long>(i + 1) * n_outer <= static_cast<long>(k + 1) * n_inner);
    if (advance_inner) {
      triangles.push_back({a, b, a_next});
      ++i;
    } else {
      triangles.push_back({a, b, b_next});
      ++k;
    }
  }
}

void push_ring(double r, int count, std::vector<Point2>& vertices) {
  for (int j = 0; j < count; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / count;
    vertices.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
}

TriMesh disk_mesh(double radius, double h) {
  const int rings = cells_for(radius, h);
  std::vector<Point2> vertices{{0.0, 0.0}};
  std::vector<std::array<int, 3>> triangles;
  int prev_start = 0, prev_count = 1;
  for (int i = 1; i <= rings; ++i) {
    const int start = static_cast<int>(vertices.size());
    const int count = 6 * i;
    push_ring(i == rings ? radius : radius * i / rings, count, vertices);
    if (i == 1) {
      for (int k = 0; k < count; ++k) triangles.push_back({0, start + k, start + (k + 1) % count});
    } else {
      stitch_rings(prev_start, prev_count, start, count, triangles);
    }
    prev_start = start;
    prev_count = count;
  }
  return finalize_mesh(std::move(vertices), std::move(triangles));
}

TriMesh annulus_mesh(double r_in, double r_out, double h) {
  const int rings = cells_for(r_out - r_in, h);
  const double hr = (r_out - r_in) / rings;
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  int prev_start = 0, prev_count = 0;
  for (int i = 0; i <= rings; ++i) {
    const double r = i == rings ? r_out : r_in + hr * i;
    const int count = std::max(6, static_cast<int>(std::lround(2.0 * std::numbers::pi * r / hr)));
    const int start = static_cast<int>(vertices.size());
    push_ring(r, count, vertices);
    if (i > 0) stitch_rings(prev_start, prev_count, start, count, triangles);
    prev_start = start;
    prev_count = count;
  }
  return finalize_mesh(std::move(vertices), std::move(triangles));
}

}  // namespace

TriMesh generate_mesh(const Domain& domain, double target_h) {
  if (!(target_h > 0.0) || !std::isfinite(target_h))
    throw Error(ErrorKind::invalid_argument, "target_h must be positive");
  const auto& p = domain.params();
  TriMesh mesh;
  switch (domain.kind()) {
    case DomainKind::square:
      mesh = grid_mesh(p.half_width, cells_for(2.0 * p.half_width, target_h), [](int, int) { return true; });
      break;
    case DomainKind::lshape: {
      const int half = cells_for(p.half_width, target_h);
      mesh = grid_mesh(p.half_width, 2 * half, [half](int i, int j) { return !(i >= half && j >= half); });
      break;
    }
    case DomainKind::disk:
      mesh = disk_mesh(p.radius, target_h);
      break;
    case DomainKind::annulus:
      mesh = annulus_mesh(p.inner_radius, p.radius, target_h);
      break;
  }
  if (mesh.interior_count() == 0)
    throw Error(ErrorKind::meshing_failure, "target_h too coarse: mesh has no interior vertex");
  return mesh;
}

}  // namespace gfnet
