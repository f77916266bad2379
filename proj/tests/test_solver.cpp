#include <doctest.h>

#include <cmath>

#include "gfnet/error.hpp"
#include "gfnet/solver.hpp"

using namespace gfnet;

namespace {

ProblemSpec disk_problem(std::function<double(Point2)> f, std::function<double(Point2)> g) {
  ProblemSpec p;
  p.name = "disk";
  p.domain = make_domain(DomainKind::disk);
  p.a = constant_field(1);
  p.r = constant_field(0);
  p.f = std::move(f);
  p.g = std::move(g);
  return p;
}

GreensModel random_model(const Domain& d) {
  GreensModel m;
  m.domain = d;
  const std::vector<Point2> xis{{-0.5, -0.5}, {0.5, -0.5}, {-0.5, 0.5}, {0.5, 0.5}};
  m.partition = make_partition(d, 2, 2, xis);
  for (int k : m.partition.occupied) m.blocks.emplace(k, init_params(3, 8, Activation::tanh, 10 + static_cast<std::uint64_t>(k)));
  return m;
}

}  // namespace

TEST_CASE("zero data gives a zero solution") {
  const Domain d = make_domain(DomainKind::square);
  const GreensModel model = random_model(d);
  ProblemSpec p = builtin_problem("case2", d);
  p.f = [](Point2) { return 0.0; };
  p.g = [](Point2) { return 0.0; };
  const TriMesh mesh = generate_mesh(d, 0.25);
  CHECK(solve_at(model, p, mesh, {0.3, -0.1}) == 0.0);
}

TEST_CASE("the solve is linear in the source") {
  const Domain d = make_domain(DomainKind::disk);
  const TriMesh mesh = generate_mesh(d, 0.15);
  const DiskGreenKernel k;
  auto f1 = [](Point2 p) { return std::cos(p.x1); };
  auto f2 = [](Point2 p) { return p.x2 * p.x2 - 3.0; };
  auto zero = [](Point2) { return 0.0; };
  const Point2 x{0.2, 0.35};
  const double u1 = solve_at(k, make_plan(disk_problem(f1, zero), mesh), d, x);
  const double u2 = solve_at(k, make_plan(disk_problem(f2, zero), mesh), d, x);
  const double u12 = solve_at(k, make_plan(disk_problem([&](Point2 p) { return f1(p) + f2(p); }, zero), mesh), d, x);
  CHECK(std::abs(u12 - (u1 + u2)) <= 1e-12);
}

TEST_CASE("homogeneous boundary data drops the boundary term") {
  const Domain d = make_domain(DomainKind::square);
  const QuadraturePlan plan = make_plan(builtin_problem("case1", d), generate_mesh(d, 0.25));
  CHECK_FALSE(plan.boundary_weights.empty());
  for (double w : plan.boundary_weights) CHECK(std::abs(w) < 1e-15);
}

TEST_CASE("closed-form kernel reproduces the disk bubble") {
  const Domain d = make_domain(DomainKind::disk);
  const ProblemSpec p = disk_problem([](Point2) { return 4.0; }, [](Point2) { return 0.0; });
  const DiskGreenKernel k;
  double prev = INFINITY;
  for (double h : {0.25, 0.125, 1.0 / 16}) {
    const double err = std::abs(solve_at(k, make_plan(p, generate_mesh(d, h)), d, {0, 0}) - 1.0);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 5e-3);
}

TEST_CASE("closed-form kernel handles nonzero boundary data") {
  const Domain d = make_domain(DomainKind::disk);
  const ProblemSpec p = builtin_problem("b1", d);
  const DiskGreenKernel k;
  const QuadraturePlan plan = make_plan(p, generate_mesh(d, 1.0 / 24));
  for (Point2 x : {Point2{0.1, 0.2}, Point2{-0.4, 0.3}})
    CHECK(solve_at(k, plan, d, x) == doctest::Approx((*p.exact_u)(x)).epsilon(2e-2));
}

TEST_CASE("targets must be strictly interior") {
  const Domain d = make_domain(DomainKind::disk);
  const DiskGreenKernel k;
  const QuadraturePlan plan = make_plan(builtin_problem("b1", d), generate_mesh(d, 0.25));
  CHECK_THROWS_AS(solve_at(k, plan, d, {1.0, 0.0}), Error);
  CHECK_THROWS_AS(solve_at(k, plan, d, {2.0, 0.0}), Error);
}

TEST_CASE("solve_field matches pointwise solves in any order and worker count") {
  const Domain d = make_domain(DomainKind::square);
  const GreensModel model = random_model(d);
  const LearnedKernel k(model);
  const QuadraturePlan plan = make_plan(builtin_problem("case2", d), generate_mesh(d, 0.25));
  const std::vector<Point2> pts{{0.1, 0.2}, {-0.6, 0.4}, {0.7, -0.7}, {-0.2, -0.3}, {0.0, 0.9}};
  const FieldSolution one = solve_field(k, plan, d, pts, 1);
  const FieldSolution four = solve_field(k, plan, d, pts, 4);
  CHECK(one.ok());
  CHECK(one.values == four.values);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(one.values[i] == solve_at(k, plan, d, pts[i]));
    const std::vector<Point2> single{pts[i]};
    CHECK(solve_field(k, plan, d, single).values[0] == one.values[i]);
  }
  std::vector<Point2> rev(pts.rbegin(), pts.rend());
  const FieldSolution back = solve_field(k, plan, d, rev, 2);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(back.values[pts.size() - 1 - i] == one.values[i]);
}

TEST_CASE("solve_field collects per-point errors") {
  const Domain d = make_domain(DomainKind::square);
  GreensModel model = random_model(d);
  model.blocks.erase(model.partition.occupied.front());
  const LearnedKernel k(model);
  const QuadraturePlan plan = make_plan(builtin_problem("case2", d), generate_mesh(d, 0.5));
  const std::vector<Point2> pts{{-0.5, -0.5}, {0.5, 0.5}, {3.0, 0.0}};
  const FieldSolution sol = solve_field(k, plan, d, pts, 2);
  CHECK_FALSE(sol.ok());
  CHECK(std::isnan(sol.values[0]));
  CHECK(std::isfinite(sol.values[1]));
  CHECK(sol.errors[1].empty());
  CHECK(std::isnan(sol.values[2]));
  CHECK_FALSE(sol.errors[2].empty());
}

TEST_CASE("model solve checks the domain") {
  const GreensModel model = random_model(make_domain(DomainKind::square));
  const Domain disk = make_domain(DomainKind::disk);
  try {
    solve_at(model, builtin_problem("b1", disk), generate_mesh(disk, 0.5), {0, 0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain_mismatch);
  }
}

TEST_CASE("relative l2 error") {
  const std::vector<double> e{1.0, -2.0, 0.5}, w{0.2, 0.3, 0.5};
  CHECK(relative_l2_error(e, e, w) == 0.0);
  const std::vector<double> scaled{1.1, -2.2, 0.55}, zero{0, 0, 0};
  CHECK(relative_l2_error(e, scaled, w) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(relative_l2_error(e, zero, w) == 1.0);
  try {
    relative_l2_error(zero, e, w);
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::zero_denominator);
  }
}

TEST_CASE("Green error on the fixed lattice") {
  const double s = 0.02;
  const auto pts = green_error_points(s);
  for (const Point2 p : pts) {
    CHECK(norm(p) <= 1.0);
    CHECK(norm(p) >= 3 * s);
  }
  CHECK(green_error_disk(analytic_green_disk, s) == 0.0);
  double num = 0, den = 0;
  for (const Point2 p : pts) {
    num += 1e-4;
    den += std::pow(analytic_green_disk(p), 2);
  }
  const double shifted = green_error_disk([](Point2 p) { return analytic_green_disk(p) + 0.01; }, s);
  CHECK(shifted > 0.0);
  CHECK(shifted == doctest::Approx(std::sqrt(num / den)).epsilon(1e-10));
  CHECK(disk_probe_pairs(s).size() == (pts.size() + 3) / 4);
}

TEST_CASE("asymmetry measure") {
  auto p = init_params(3, 8, Activation::sin, 3);
  const auto probes = disk_probe_pairs(0.02);
  CHECK(asymmetry_measure(p, probes) > 0.0);
  for (int k = 1; k <= p.depth(); ++k) p.weight(k).setZero();
  CHECK(asymmetry_measure(p, probes) == 0.0);
}

TEST_CASE("mesh integration") {
  const Domain d = make_domain(DomainKind::square);
  CHECK(integrate(generate_mesh(d, 0.25), [](Point2 p) { return std::pow(p.x1 + 1, 3) + p.x1 * p.x2 * p.x2; }) ==
        doctest::Approx(8.0).epsilon(1e-14));
}
