#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "gfnet/error.hpp"
#include "gfnet/geometry.hpp"
#include "gfnet/mesh_io.hpp"

using namespace gfnet;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::invalid_argument;
}

void check_mesh_invariants(const Domain& d, const TriMesh& m) {
  std::map<std::pair<int, int>, int> uses;
  double area = 0.0;
  for (const auto& t : m.triangles) {
    const double a = signed_area(m.vertices[static_cast<std::size_t>(t[0])], m.vertices[static_cast<std::size_t>(t[1])],
                                 m.vertices[static_cast<std::size_t>(t[2])]);
    CHECK(a > 0.0);
    area += a;
    for (int i = 0; i < 3; ++i) {
      const int u = t[static_cast<std::size_t>(i)], v = t[static_cast<std::size_t>((i + 1) % 3)];
      ++uses[{std::min(u, v), std::max(u, v)}];
    }
  }
  std::size_t boundary = 0;
  for (const auto& [edge, count] : uses) {
    CHECK((count == 1 || count == 2));
    if (count == 1) ++boundary;
  }
  CHECK(boundary == m.boundary_edges.size());
  double dual = 0.0;
  for (double a : m.dual_area) {
    CHECK(a > 0.0);
    dual += a;
  }
  CHECK(dual == doctest::Approx(area).epsilon(1e-12));
  CHECK(area == doctest::Approx(d.area()).epsilon(0.01));
  for (const auto& e : m.boundary_edges) {
    const Point2 p = 0.5 * (m.vertices[static_cast<std::size_t>(e.v[0])] + m.vertices[static_cast<std::size_t>(e.v[1])]);
    CHECK(norm(e.normal) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.signed_distance(p + 1e-6 * e.normal) > d.signed_distance(p));
  }
}

}  // namespace

TEST_CASE("signed distances of the benchmark domains") {
  CHECK(make_domain(DomainKind::square).signed_distance({0, 0}) == -1.0);
  CHECK(make_domain(DomainKind::annulus).signed_distance({0.75, 0}) == doctest::Approx(-0.25));
  CHECK(make_domain(DomainKind::lshape).signed_distance({0.5, 0.5}) > 0.0);
  CHECK(make_domain(DomainKind::lshape).signed_distance({-0.5, -0.5}) < 0.0);
  CHECK(make_domain(DomainKind::disk).signed_distance({0.6, 0.8}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(make_domain(DomainKind::square).signed_distance({2, 0}) == 1.0);
}

TEST_CASE("invalid geometry is rejected") {
  CHECK(kind_of([] { make_domain(DomainKind::disk, {1.0, -1.0, 0.5}); }) == ErrorKind::invalid_geometry);
  CHECK(kind_of([] { make_domain(DomainKind::annulus, {1.0, 1.0, 1.5}); }) == ErrorKind::invalid_geometry);
  CHECK(kind_of([] { parse_domain_kind("circle"); }) == ErrorKind::unknown_name);
}

TEST_CASE("square mesh at h = 1 is a split 3x3 grid") {
  const TriMesh m = generate_mesh(make_domain(DomainKind::square), 1.0);
  CHECK(m.vertices.size() == 9);
  CHECK(m.triangles.size() == 8);
  CHECK(m.interior_count() == 1);
  double sum = 0.0;
  for (double a : m.dual_area) sum += a;
  CHECK(sum == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("halving h roughly quadruples the square vertex count") {
  const Domain d = make_domain(DomainKind::square);
  for (double h : {0.25, 0.125, 0.0625}) {
    const double ratio = static_cast<double>(generate_mesh(d, h / 2).vertices.size()) /
                         static_cast<double>(generate_mesh(d, h).vertices.size());
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }
}

TEST_CASE("disk boundary vertices lie on the circle") {
  const Domain d = make_domain(DomainKind::disk);
  for (double h : {0.3, 0.1, 0.037}) {
    const TriMesh m = generate_mesh(d, h);
    for (std::size_t i = 0; i < m.vertices.size(); ++i)
      if (m.is_boundary_vertex[i]) CHECK(std::abs(norm(m.vertices[i]) - 1.0) <= 1e-12);
  }
}

TEST_CASE("mesh invariants hold on every domain") {
  for (DomainKind k : {DomainKind::square, DomainKind::disk, DomainKind::annulus, DomainKind::lshape}) {
    const Domain d = make_domain(k);
    for (double h : {0.2, 0.1}) check_mesh_invariants(d, generate_mesh(d, h));
  }
}

TEST_CASE("faceting error is second order in h") {
  for (DomainKind k : {DomainKind::disk, DomainKind::annulus}) {
    const Domain d = make_domain(k);
    for (double h : {0.4, 0.2, 0.1, 0.05, 0.025}) CHECK(std::abs(generate_mesh(d, h).total_area() - d.area()) <= h * h);
  }
}

TEST_CASE("L-shape mesh excludes the removed quadrant") {
  const TriMesh m = generate_mesh(make_domain(DomainKind::lshape), 0.25);
  for (const auto& t : m.triangles) {
    Point2 c{0, 0};
    for (int v : t) c = c + (1.0 / 3.0) * m.vertices[static_cast<std::size_t>(v)];
    CHECK_FALSE((c.x1 > 0 && c.x2 > 0));
  }
}

TEST_CASE("dual areas of the reference triangle") {
  const TriMesh m = finalize_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  for (double a : m.dual_area) CHECK(a == doctest::Approx(1.0 / 6.0));
  CHECK(m.boundary_edges.size() == 3);
}

TEST_CASE("degenerate and non-manifold input is rejected") {
  CHECK(kind_of([] { finalize_mesh({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}); }) == ErrorKind::degenerate_triangle);
  CHECK(kind_of([] { finalize_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}}); }) == ErrorKind::degenerate_triangle);
  CHECK(kind_of([] {
          finalize_mesh({{0, 0}, {1, 0}, {0, 1}, {0, -1}, {1, 1}}, {{0, 1, 2}, {0, 3, 1}, {1, 4, 0}});
        }) == ErrorKind::meshing_failure);
  CHECK(kind_of([] { generate_mesh(make_domain(DomainKind::square), 5.0); }) == ErrorKind::meshing_failure);
  CHECK(kind_of([] { generate_mesh(make_domain(DomainKind::square), -1.0); }) == ErrorKind::invalid_argument);
}

TEST_CASE("GFMESH round trip is lossless") {
  const TriMesh m = generate_mesh(make_domain(DomainKind::annulus), 0.15);
  std::stringstream s;
  write_mesh(s, m);
  const TriMesh back = read_mesh(s);
  CHECK(back.vertices == m.vertices);
  CHECK(back.triangles == m.triangles);
  CHECK(back.is_boundary_vertex == m.is_boundary_vertex);
  REQUIRE(back.boundary_edges.size() == m.boundary_edges.size());
  for (std::size_t i = 0; i < m.boundary_edges.size(); ++i) {
    CHECK(back.boundary_edges[i].v == m.boundary_edges[i].v);
    CHECK(back.boundary_edges[i].normal == m.boundary_edges[i].normal);
  }
  CHECK(back.dual_area == m.dual_area);
  std::stringstream again;
  write_mesh(again, back);
  std::stringstream first;
  write_mesh(first, m);
  CHECK(again.str() == first.str());
}

TEST_CASE("malformed mesh text is a parse failure") {
  std::stringstream s("GFMESH 1\nV 2\n0 0 1\n");
  CHECK(kind_of([&] { read_mesh(s); }) == ErrorKind::parse_failure);
  std::stringstream t("GFMESH 2\n");
  CHECK(kind_of([&] { read_mesh(t); }) == ErrorKind::parse_failure);
}
