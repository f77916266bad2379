#include <doctest.h>

#include <cmath>

#include "gfnet/optim.hpp"

using namespace gfnet;

namespace {

double rosenbrock(const Eigen::VectorXd& x, Eigen::VectorXd& g) {
  double f = 0.0;
  g.setZero(x.size());
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double a = x(i + 1) - x(i) * x(i), b = 1.0 - x(i);
    f += 100.0 * a * a + b * b;
    g(i) += -400.0 * a * x(i) - 2.0 * b;
    g(i + 1) += 200.0 * a;
  }
  return f;
}

}  // namespace

TEST_CASE("first Adam step moves each coordinate by the learning rate") {
  Eigen::VectorXd x(3);
  x << 1.0, -2.0, 0.5;
  Eigen::VectorXd g(3);
  g << 0.3, -5.0, 1e-3;
  AdamState st;
  adam_step(st, x, g, {});
  CHECK(x(0) == doctest::Approx(1.0 - 1e-3).epsilon(1e-6));
  CHECK(x(1) == doctest::Approx(-2.0 + 1e-3).epsilon(1e-6));
  CHECK(x(2) == doctest::Approx(0.5 - 1e-3 * 1e-3 / (1e-3 + 1e-8)).epsilon(1e-9));
  CHECK(st.t == 1);
}

TEST_CASE("Adam second step follows the bias-corrected moments") {
  Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 0.0), g1 = Eigen::VectorXd::Constant(1, 2.0),
                  g2 = Eigen::VectorXd::Constant(1, -1.0);
  AdamState st;
  AdamConfig cfg;
  adam_step(st, x, g1, cfg);
  const double x1 = x(0);
  adam_step(st, x, g2, cfg);
  const double m = 0.9 * 0.1 * 2.0 + 0.1 * -1.0, v = 0.999 * 0.001 * 4.0 + 0.001 * 1.0;
  const double mh = m / (1 - 0.81), vh = v / (1 - 0.999 * 0.999);
  CHECK(x(0) == doctest::Approx(x1 - 1e-3 * mh / (std::sqrt(vh) + 1e-8)).epsilon(1e-10));
}

TEST_CASE("L-BFGS minimises the Rosenbrock function") {
  Eigen::VectorXd x0(6);
  x0 << -1.2, 1.0, -1.2, 1.0, 0.5, 0.3;
  LbfgsOptions o;
  o.tol = 1e-16;
  o.max_steps = 500;
  double last = INFINITY;
  bool monotone = true;
  const auto r = lbfgs_minimize(rosenbrock, x0, o, [&](int, double f) {
    monotone = monotone && f <= last;
    last = f;
  });
  CHECK(monotone);
  CHECK(r.stop == StopReason::tolerance);
  CHECK((r.x - Eigen::VectorXd::Ones(6)).norm() < 1e-6);
}

TEST_CASE("L-BFGS solves a convex quadratic in a handful of steps") {
  Eigen::VectorXd diag(20);
  for (int i = 0; i < 20; ++i) diag(i) = 1.0 + i;
  auto quad = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g = diag.cwiseProduct(x - Eigen::VectorXd::Ones(20));
    return 0.5 * (x - Eigen::VectorXd::Ones(20)).dot(g);
  };
  LbfgsOptions o;
  o.tol = 1e-20;
  o.max_steps = 200;
  const auto r = lbfgs_minimize(quad, Eigen::VectorXd::Zero(20), o);
  CHECK(r.f <= 1e-20);
  CHECK(r.steps < 60);
}

TEST_CASE("L-BFGS stops at max_steps and reports it") {
  Eigen::VectorXd x0(2);
  x0 << -1.2, 1.0;
  LbfgsOptions o;
  o.tol = 0.0;
  o.max_steps = 3;
  const auto r = lbfgs_minimize(rosenbrock, x0, o);
  CHECK(r.stop == StopReason::max_steps);
  CHECK(r.steps == 3);
}

TEST_CASE("L-BFGS at a stationary point stops at tolerance immediately") {
  const auto r = lbfgs_minimize(rosenbrock, Eigen::VectorXd::Ones(4), {});
  CHECK(r.stop == StopReason::tolerance);
  CHECK(r.steps == 0);
}

TEST_CASE("line search failure returns the starting point") {
  // Gradient points the wrong way: no descent is possible along -g.
  auto bad = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g = -x;
    g(0) -= 1.0;
    return x.squaredNorm() + 1.0;
  };
  Eigen::VectorXd x0 = Eigen::VectorXd::Constant(2, 0.5);
  LbfgsOptions o;
  o.tol = 0.0;
  const auto r = lbfgs_minimize(bad, x0, o);
  CHECK(r.stop == StopReason::line_search_failure);
  CHECK(r.x == x0);
}

TEST_CASE("L-BFGS finds the minimiser of a round quadratic within two steps") {
  Eigen::VectorXd x0(2);
  x0 << 3.0, 4.0;
  LbfgsOptions o;
  o.tol = 1e-20;
  const auto r = lbfgs_minimize(
      [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        g = x;
        return 0.5 * x.squaredNorm();
      },
      x0, o);
  CHECK(r.steps <= 2);
  CHECK(r.x.norm() < 1e-8);
}

TEST_CASE("L-BFGS with memory 10 solves the two-dimensional Rosenbrock problem") {
  Eigen::VectorXd x0(2);
  x0 << -1.2, 1.0;
  LbfgsOptions o;
  o.memory = 10;
  o.tol = 1e-8;
  o.max_steps = 100;
  const auto r = lbfgs_minimize(rosenbrock, x0, o);
  CHECK(r.f < 1e-8);
  CHECK(r.steps <= 100);
  CHECK((r.x - Eigen::VectorXd::Ones(2)).norm() < 1e-3);
}
