#include "gfnet/pde.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

#include "gfnet/error.hpp"
#include "gfnet/text_io.hpp"

namespace gfnet {

namespace {
constexpr double kPi = std::numbers::pi;
}

double sin_pi(double t) {
  const double r = std::fmod(t, 2.0);
  if (r == 0.0 || std::abs(r) == 1.0) return 0.0;
  return std::sin(kPi * r);
}

double cos_pi(double t) {
  const double r = std::fmod(std::abs(t), 2.0);
  if (r == 0.5 || r == 1.5) return 0.0;
  return std::cos(kPi * r);
}

ScalarField constant_field(double c) {
  return {"const:" + format_double(c), [c](Point2) { return c; }, [](Point2) { return Point2{}; }};
}

ScalarField diffusion_1p2x2sq() {
  return {"1+2x2^2", [](Point2 p) { return 1.0 + 2.0 * p.x2 * p.x2; },
          [](Point2 p) { return Point2{0.0, 4.0 * p.x2}; }};
}

ScalarField reaction_1px1sq() {
  return {"1+x1^2", [](Point2 p) { return 1.0 + p.x1 * p.x1; }, [](Point2 p) { return Point2{2.0 * p.x1, 0.0}; }};
}

ScalarField parse_field(std::string_view spec) {
  if (spec == "1+2x2^2") return diffusion_1p2x2sq();
  if (spec == "1+x1^2") return reaction_1px1sq();
  std::string_view num = spec;
  if (num.starts_with("const:")) num.remove_prefix(6);
  try {
    return constant_field(parse_double(num));
  } catch (const Error&) {
    throw Error(ErrorKind::unknown_name, "unknown coefficient field '" + std::string(spec) + "'");
  }
}

double gaussian_density(Point2 x, Point2 xi, double s) {
  const Point2 d = x - xi;
  return std::exp(-dot(d, d) / (2.0 * s * s)) / (2.0 * kPi * s * s);
}

MollifiedDirac::MollifiedDirac(double s_) : s(s_) {
  if (!(s_ > 0.0)) throw Error(ErrorKind::invalid_argument, "mollifier s must be positive");
}

double apply_operator(const ScalarField& a, const ScalarField& r, Point2 x, const DerivBundle& u) {
  return apply_operator(a.value(x), a.gradient(x), r.value(x), u);
}

std::function<double(Point2)> manufactured_source(const ScalarField& a, const ScalarField& r,
                                                  const ExactSolution& u) {
  return [a, r, u](Point2 x) { return apply_operator(a, r, x, u.eval(x)); };
}

namespace {

DerivBundle case1(Point2 p) {
  const double s1 = sin_pi(2.0 * p.x1), s2 = sin_pi(2.0 * p.x2);
  const double c1 = cos_pi(2.0 * p.x1), c2 = cos_pi(2.0 * p.x2);
  const double u = s1 * s2;
  const double k = 2.0 * kPi;
  return {u, {k * c1 * s2, k * s1 * c2}, {-k * k * u, -k * k * u}};
}

DerivBundle case2(Point2 p) {
  const double c1 = cos_pi(p.x1), c2 = cos_pi(p.x2);
  const double s1 = sin_pi(p.x1), s2 = sin_pi(p.x2);
  const double u = c1 * c2;
  return {u, {-kPi * s1 * c2, -kPi * c1 * s2}, {-kPi * kPi * u, -kPi * kPi * u}};
}

DerivBundle b1(Point2 p) {
  return {p.x1 * p.x1 + p.x2 * p.x2, {2.0 * p.x1, 2.0 * p.x2}, {2.0, 2.0}};
}

// cos(pi x2 / 2) plus (x1 - 0.6 (x2 + 1))^{3/2} on the side x1 > 0.6 (x2 + 1).
DerivBundle b2(Point2 p) {
  double t = p.x1 - 0.6 * (p.x2 + 1.0);
  const double c = cos_pi(0.5 * p.x2), s = sin_pi(0.5 * p.x2);
  DerivBundle b{c, {0.0, -0.5 * kPi * s}, {0.0, -0.25 * kPi * kPi * c}};
  if (t == 0.0) {
    // The second derivative is one-sided on the interface; evaluate just across it.
    static thread_local bool warned = false;
    if (!warned) {
      std::clog << "gfnet: b2 evaluated on the interface x1 = 0.6(x2+1); perturbing x1 by 1e-12\n";
      warned = true;
    }
    t = 1e-12;
  }
  if (t > 0.0) {
    const double rt = std::sqrt(t);
    b.value += t * rt;
    b.grad.x1 += 1.5 * rt;
    b.grad.x2 += -0.9 * rt;
    b.hess_diag.x1 += 0.75 / rt;
    b.hess_diag.x2 += 0.27 / rt;
  }
  return b;
}

DerivBundle b3(Point2 p) {
  const double dx = p.x1 + 0.5, dy = p.x2 + 0.5;
  const double u = std::exp(-100.0 * (dx * dx + dy * dy));
  return {u, {-200.0 * dx * u, -200.0 * dy * u}, {(40000.0 * dx * dx - 200.0) * u, (40000.0 * dy * dy - 200.0) * u}};
}

DerivBundle reacdiff(Point2 p) {
  const double u = std::exp(-(p.x1 * p.x1 + 2.0 * p.x2 * p.x2 + 1.0));
  return {u,
          {-2.0 * p.x1 * u, -4.0 * p.x2 * u},
          {(4.0 * p.x1 * p.x1 - 2.0) * u, (16.0 * p.x2 * p.x2 - 4.0) * u}};
}

DerivBundle bubble(Point2 p) {
  return {1.0 - p.x1 * p.x1 - p.x2 * p.x2, {-2.0 * p.x1, -2.0 * p.x2}, {-2.0, -2.0}};
}

}  // namespace

std::vector<std::string> builtin_problem_names() {
  return {"case1", "case2", "b1", "b2", "b3", "reacdiff", "bubble"};
}

ExactSolution exact_solution(std::string_view name) {
  if (name == "case1") return {"case1", case1};
  if (name == "case2") return {"case2", case2};
  if (name == "b1") return {"b1", b1};
  if (name == "b2") return {"b2", b2};
  if (name == "b3") return {"b3", b3};
  if (name == "reacdiff") return {"reacdiff", reacdiff};
  if (name == "bubble") return {"bubble", bubble};
  throw Error(ErrorKind::unknown_name, "unknown problem '" + std::string(name) + "'");
}

ProblemSpec custom_problem(const Domain& domain, ScalarField a, ScalarField r, std::string_view exact_name) {
  ProblemSpec p;
  p.domain = domain;
  p.exact_u = exact_solution(exact_name);
  p.name = p.exact_u->name;
  p.a = std::move(a);
  p.r = std::move(r);
  p.f = manufactured_source(p.a, p.r, *p.exact_u);
  p.g = [u = *p.exact_u](Point2 x) { return u(x); };
  return p;
}

ProblemSpec builtin_problem(std::string_view name, const Domain& domain) {
  if (name == "reacdiff") return custom_problem(domain, diffusion_1p2x2sq(), reaction_1px1sq(), name);
  return custom_problem(domain, constant_field(1.0), constant_field(0.0), name);
}

double analytic_green_disk(Point2 x) {
  const double r2 = x.x1 * x.x1 + x.x2 * x.x2;
  if (r2 == 0.0) throw Error(ErrorKind::singular_point, "disk Green's function is singular at the origin");
  return -std::log(r2) / (4.0 * kPi);
}

double disk_green(Point2 x, Point2 xi) {
  const Point2 d = x - xi;
  const double dist2 = dot(d, d);
  if (dist2 == 0.0) throw Error(ErrorKind::singular_point, "disk Green's function is singular at x = xi");
  const double image = dot(x, x) * dot(xi, xi) - 2.0 * dot(x, xi) + 1.0;
  return (std::log(image) - std::log(dist2)) / (4.0 * kPi);
}

Point2 disk_green_grad_x(Point2 x, Point2 xi) {
  const Point2 d = x - xi;
  const double dist2 = dot(d, d);
  if (dist2 == 0.0) throw Error(ErrorKind::singular_point, "disk Green's function is singular at x = xi");
  const double xi2 = dot(xi, xi);
  const double image = dot(x, x) * xi2 - 2.0 * dot(x, xi) + 1.0;
  const Point2 gi = (2.0 / image) * (xi2 * x - xi);
  const Point2 gd = (2.0 / dist2) * d;
  return (1.0 / (4.0 * kPi)) * (gi - gd);
}

}  // namespace gfnet
