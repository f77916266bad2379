#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gfnet/geometry.hpp"

namespace gfnet {

/// Coefficient field with its analytic gradient.
struct ScalarField {
  std::string name;
  std::function<double(Point2)> value;
  std::function<Point2(Point2)> gradient;
};

ScalarField constant_field(double c);
/// 1 + 2 x2^2
ScalarField diffusion_1p2x2sq();
/// 1 + x1^2
ScalarField reaction_1px1sq();
/// Accepts "const:<c>" (or a bare number), "1+2x2^2", "1+x1^2".
ScalarField parse_field(std::string_view spec);

/// Value, gradient and diagonal Hessian of a function at one point.
struct DerivBundle {
  double value = 0.0;
  Point2 grad;
  Point2 hess_diag;
};

struct ExactSolution {
  std::string name;
  std::function<DerivBundle(Point2)> eval;

  double operator()(Point2 p) const { return eval(p).value; }
};

/// One Dirichlet problem  -div(a grad u) + r u = f in the domain, u = g on its boundary.
struct ProblemSpec {
  std::string name;
  Domain domain;
  ScalarField a;
  ScalarField r;
  std::function<double(Point2)> f;
  std::function<double(Point2)> g;
  std::optional<ExactSolution> exact_u;
};

/// Gaussian density with standard deviation s standing in for the Dirac delta.
double gaussian_density(Point2 x, Point2 xi, double s);

struct MollifiedDirac {
  double s = 0.02;

  explicit MollifiedDirac(double s_);
  double operator()(Point2 x, Point2 xi) const { return gaussian_density(x, xi, s); }
};

/// -a lap(u) - grad(a).grad(u) + r u, from a value/gradient/diag-Hessian bundle.
double apply_operator(const ScalarField& a, const ScalarField& r, Point2 x, const DerivBundle& u);
inline double apply_operator(double a, Point2 grad_a, double r, const DerivBundle& u) {
  return -a * (u.hess_diag.x1 + u.hess_diag.x2) - (grad_a.x1 * u.grad.x1 + grad_a.x2 * u.grad.x2) + r * u.value;
}

std::function<double(Point2)> manufactured_source(const ScalarField& a, const ScalarField& r,
                                                  const ExactSolution& u);

/// case1, case2, b1, b2, b3, reacdiff, bubble.
ExactSolution exact_solution(std::string_view name);
std::vector<std::string> builtin_problem_names();

/// Fully populated problem with manufactured f and g. `reacdiff` uses
/// a = 1 + 2 x2^2, r = 1 + x1^2; every other problem is the Poisson equation.
ProblemSpec builtin_problem(std::string_view name, const Domain& domain);

/// Problem with chosen coefficients and manufactured data from a named exact solution.
ProblemSpec custom_problem(const Domain& domain, ScalarField a, ScalarField r, std::string_view exact_name);

/// Green's function of -lap on the unit disk with the source at the origin:
/// -(1/4 pi) ln(x1^2 + x2^2). Throws Error(singular_point) at the origin.
double analytic_green_disk(Point2 x);

/// Unit-disk Green's function of -lap for a general source (method of images),
/// with its gradient in the first argument.
double disk_green(Point2 x, Point2 xi);
Point2 disk_green_grad_x(Point2 x, Point2 xi);

/// sin(pi t) and cos(pi t) with exact zeros at the integer and half-integer roots.
double sin_pi(double t);
double cos_pi(double t);

}  // namespace gfnet
