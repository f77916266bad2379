#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gfnet/error.hpp"
#include "gfnet/pde.hpp"

using namespace gfnet;

namespace {

constexpr double pi = std::numbers::pi;

DerivBundle fd_bundle(const ExactSolution& u, Point2 p, double h) {
  auto f = [&](double dx, double dy) { return u({p.x1 + dx, p.x2 + dy}); };
  return {u(p),
          {(f(h, 0) - f(-h, 0)) / (2 * h), (f(0, h) - f(0, -h)) / (2 * h)},
          {(f(h, 0) - 2 * f(0, 0) + f(-h, 0)) / (h * h), (f(0, h) - 2 * f(0, 0) + f(0, -h)) / (h * h)}};
}

}  // namespace

TEST_CASE("Gaussian density values") {
  const double peak = 1.0 / (2 * pi * 0.0004);
  CHECK(gaussian_density({0, 0}, {0, 0}, 0.02) == doctest::Approx(397.8874).epsilon(1e-6));
  CHECK(gaussian_density({0.02, 0}, {0, 0}, 0.02) == doctest::Approx(peak * std::exp(-0.5)));
  CHECK(gaussian_density({0, 0.06}, {0, 0}, 0.02) == doctest::Approx(4.4202).epsilon(1e-4));
  CHECK_THROWS_AS(MollifiedDirac(0.0), Error);
}

TEST_CASE("operator application") {
  const ScalarField one = constant_field(1), zero = constant_field(0);
  CHECK(apply_operator(one, zero, {0.3, 0.4}, {0.25, {0.6, 0.8}, {2, 2}}) == -4.0);
  const ExactSolution c1 = exact_solution("case1");
  CHECK(apply_operator(one, zero, {0.25, 0.25}, c1.eval({0.25, 0.25})) == doctest::Approx(8 * pi * pi));
  const ExactSolution rd = exact_solution("reacdiff");
  CHECK(apply_operator(diffusion_1p2x2sq(), reaction_1px1sq(), {0, 0}, rd.eval({0, 0})) ==
        doctest::Approx(7 * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("manufactured sources") {
  const Domain sq = make_domain(DomainKind::square);
  CHECK(builtin_problem("case2", sq).f({0, 0}) == doctest::Approx(2 * pi * pi));
  CHECK(builtin_problem("b1", sq).f({0.37, -0.2}) == doctest::Approx(-4.0));
  CHECK(builtin_problem("b3", sq).f({-0.5, -0.5}) == doctest::Approx(400.0));
}

TEST_CASE("builtin exact solutions") {
  CHECK(exact_solution("case1")({0.25, 0.25}) == doctest::Approx(1.0));
  CHECK(exact_solution("reacdiff")({0, 0}) == doctest::Approx(0.3678794).epsilon(1e-7));
  CHECK(exact_solution("b2")({0, 0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(exact_solution("case9"), Error);
  CHECK_THROWS_AS(builtin_problem("nope", make_domain(DomainKind::square)), Error);
}

TEST_CASE("case I vanishes on the square boundary") {
  const ExactSolution u = exact_solution("case1");
  for (double t = -1; t <= 1; t += 0.125) {
    CHECK(u({t, 1}) == 0.0);
    CHECK(u({-1, t}) == 0.0);
  }
}

TEST_CASE("analytic derivative bundles match finite differences") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> uni(-0.9, 0.9);
  for (const auto& name : builtin_problem_names()) {
    const ExactSolution u = exact_solution(name);
    for (int i = 0; i < 50; ++i) {
      const Point2 p{uni(gen), uni(gen)};
      if (name == "b2" && std::abs(p.x1 - 0.6 * (p.x2 + 1)) < 0.05) continue;
      const DerivBundle a = u.eval(p), f = fd_bundle(u, p, 1e-4);
      const double scale = 1.0 + std::abs(a.hess_diag.x1) + std::abs(a.hess_diag.x2);
      CHECK(a.grad.x1 == doctest::Approx(f.grad.x1).epsilon(1e-6).scale(scale));
      CHECK(a.grad.x2 == doctest::Approx(f.grad.x2).epsilon(1e-6).scale(scale));
      CHECK(a.hess_diag.x1 == doctest::Approx(f.hess_diag.x1).epsilon(1e-4).scale(scale));
      CHECK(a.hess_diag.x2 == doctest::Approx(f.hess_diag.x2).epsilon(1e-4).scale(scale));
    }
  }
}

TEST_CASE("coefficient gradients match finite differences") {
  for (const ScalarField& a : {diffusion_1p2x2sq(), reaction_1px1sq(), constant_field(2.5)}) {
    for (Point2 p : {Point2{0.3, -0.7}, Point2{-0.55, 0.2}}) {
      const double h = 1e-5;
      const Point2 g = a.gradient(p);
      CHECK(g.x1 == doctest::Approx((a.value({p.x1 + h, p.x2}) - a.value({p.x1 - h, p.x2})) / (2 * h)).epsilon(1e-6).scale(1));
      CHECK(g.x2 == doctest::Approx((a.value({p.x1, p.x2 + h}) - a.value({p.x1, p.x2 - h})) / (2 * h)).epsilon(1e-6).scale(1));
    }
  }
}

TEST_CASE("manufactured consistency at random points") {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> uni(-0.95, 0.95);
  for (DomainKind k : {DomainKind::square, DomainKind::annulus, DomainKind::lshape}) {
    const Domain d = make_domain(k);
    for (const auto& name : builtin_problem_names()) {
      const ProblemSpec p = builtin_problem(name, d);
      REQUIRE(p.exact_u);
      for (int i = 0; i < 1000; ++i) {
        const Point2 x{uni(gen), uni(gen)};
        CHECK(apply_operator(p.a, p.r, x, p.exact_u->eval(x)) == p.f(x));
        CHECK(p.a.value(x) > 0.0);
        CHECK(p.r.value(x) >= 0.0);
      }
      CHECK(p.g({1.0, 0.3}) == (*p.exact_u)({1.0, 0.3}));
    }
  }
}

TEST_CASE("coefficient field parsing") {
  CHECK(parse_field("const:2.5").value({3, 4}) == 2.5);
  CHECK(parse_field("3").value({0, 0}) == 3.0);
  CHECK(parse_field("1+2x2^2").value({0, 0.5}) == doctest::Approx(1.5));
  CHECK(parse_field("1+x1^2").value({2, 0}) == doctest::Approx(5.0));
  CHECK_THROWS_AS(parse_field("x^3"), Error);
}

TEST_CASE("custom problem keeps the exact solution and changes the source") {
  const Domain d = make_domain(DomainKind::square);
  const ProblemSpec p = custom_problem(d, constant_field(2.0), constant_field(1.0), "case2");
  CHECK(p.f({0, 0}) == doctest::Approx(4 * pi * pi + 1));
}

TEST_CASE("disk Green's function") {
  CHECK(analytic_green_disk({0.5, 0}) == doctest::Approx(std::log(4.0) / (4 * pi)));
  CHECK(analytic_green_disk({0.1, 0}) == doctest::Approx(std::log(100.0) / (4 * pi)).epsilon(1e-14));
  CHECK(analytic_green_disk({0.1, 0}) == doctest::Approx(0.3664678).epsilon(1e-6));
  for (int i = 0; i < 360; ++i) {
    const double t = 2 * pi * i / 360.0;
    CHECK(std::abs(analytic_green_disk({std::cos(t), std::sin(t)})) < 1e-14);
  }
  try {
    analytic_green_disk({0, 0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::singular_point);
  }
  CHECK(disk_green({0.3, 0.4}, {0, 0}) == doctest::Approx(analytic_green_disk({0.3, 0.4})));
  CHECK(disk_green({0.3, 0.4}, {-0.2, 0.1}) == doctest::Approx(disk_green({-0.2, 0.1}, {0.3, 0.4})));
  const Point2 x{0.3, -0.2}, xi{-0.5, 0.1};
  const Point2 g = disk_green_grad_x(x, xi);
  const double h = 1e-6;
  CHECK(g.x1 == doctest::Approx((disk_green({x.x1 + h, x.x2}, xi) - disk_green({x.x1 - h, x.x2}, xi)) / (2 * h)).epsilon(1e-6));
  CHECK(g.x2 == doctest::Approx((disk_green({x.x1, x.x2 + h}, xi) - disk_green({x.x1, x.x2 - h}, xi)) / (2 * h)).epsilon(1e-6));
}
