#include <doctest.h>

#include <cmath>
#include <vector>

#include "gfnet/network.hpp"

using namespace gfnet;

namespace {

double fd(const GFNetParams& p, Point2 x, Point2 xi, int which, double h) {
  auto shifted = [&](double t) {
    Point2 a = x, b = xi;
    if (which == 0) a.x1 += t;
    if (which == 1) a.x2 += t;
    if (which == 2) b.x1 += t;
    if (which == 3) b.x2 += t;
    return forward(p, a, b);
  };
  return (shifted(h) - shifted(-h)) / (2 * h);
}

double fd2(const GFNetParams& p, Point2 x, Point2 xi, int which, double h) {
  Point2 a = x, b = x;
  if (which == 0) { a.x1 += h; b.x1 -= h; }
  else { a.x2 += h; b.x2 -= h; }
  return (forward(p, a, xi) - 2 * forward(p, x, xi) + forward(p, b, xi)) / (h * h);
}

}  // namespace

TEST_CASE("auxiliary layer stacks x, xi and their difference") {
  const auto z = aux_layer({0.3, -0.2}, {0.1, 0.5});
  CHECK(z[0] == 0.3);
  CHECK(z[1] == -0.2);
  CHECK(z[2] == 0.1);
  CHECK(z[3] == 0.5);
  CHECK(z[4] == doctest::Approx(0.2));
  CHECK(z[5] == doctest::Approx(-0.7));
}

TEST_CASE("parameter count of the default architecture") {
  const GFNetParams p(7, 50, Activation::sin);
  CHECK(p.parameter_count() == 6 * 50 + 50 + 5 * (50 * 50 + 50) + 50 + 1);
}

TEST_CASE("zero weights give zero output") {
  GFNetParams p(4, 8, Activation::tanh);
  p.theta().setZero();
  CHECK(forward(p, {0.2, 0.4}, {-0.1, 0.3}) == 0.0);
}

TEST_CASE("initialisation is reproducible and seed dependent") {
  const auto a = init_params(7, 50, Activation::sin, 11);
  const auto b = init_params(7, 50, Activation::sin, 11);
  const auto c = init_params(7, 50, Activation::sin, 12);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a.bias(3).isZero());
  const double limit = std::sqrt(6.0 / (50 + 50));
  CHECK(a.weight(3).cwiseAbs().maxCoeff() <= limit);
}

TEST_CASE("input derivatives match central differences") {
  for (Activation act : {Activation::sin, Activation::tanh, Activation::sigmoid}) {
    for (ActivationPlacement pl : {ActivationPlacement::all_hidden, ActivationPlacement::skip_last_hidden}) {
      const auto p = init_params(4, 12, act, 3, pl);
      const Point2 x{0.31, -0.42}, xi{-0.17, 0.23};
      const EvalBundle e = forward_derivs(p, x, xi);
      CHECK(e.value == forward(p, x, xi));
      CHECK(e.grad_x.x1 == doctest::Approx(fd(p, x, xi, 0, 1e-5)).epsilon(1e-6));
      CHECK(e.grad_x.x2 == doctest::Approx(fd(p, x, xi, 1, 1e-5)).epsilon(1e-6));
      CHECK(e.grad_xi.x1 == doctest::Approx(fd(p, x, xi, 2, 1e-5)).epsilon(1e-6));
      CHECK(e.grad_xi.x2 == doctest::Approx(fd(p, x, xi, 3, 1e-5)).epsilon(1e-6));
      CHECK(e.hess_x_diag.x1 == doctest::Approx(fd2(p, x, xi, 0, 1e-4)).epsilon(1e-4));
      CHECK(e.hess_x_diag.x2 == doctest::Approx(fd2(p, x, xi, 1, 1e-4)).epsilon(1e-4));
    }
  }
}

TEST_CASE("batched values agree with single evaluation") {
  const auto p = init_params(5, 16, Activation::sin, 9);
  std::vector<SamplePair> pairs;
  for (int i = 0; i < 700; ++i) pairs.push_back({{std::sin(i * 1.0), std::cos(i * 0.7)}, {0.1 * (i % 7), -0.05 * (i % 5)}});
  const auto vals = batch_values(p, pairs);
  const auto bundles = batch_eval(p, pairs);
  REQUIRE(vals.size() == pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double ref = forward(p, pairs[i].x, pairs[i].xi);
    CHECK(vals[i] == doctest::Approx(ref).epsilon(1e-13));
    CHECK(bundles[i].value == ref);
  }
}

TEST_CASE("propagation channels agree with point derivatives") {
  const auto p = init_params(4, 10, Activation::tanh, 5);
  std::vector<SamplePair> pairs{{{0.1, 0.2}, {0.3, -0.4}}, {{-0.5, 0.6}, {0.0, 0.1}}, {{0.9, -0.9}, {-0.2, 0.2}}};
  Propagation prop;
  prop.forward(p, pairs, Channels::full);
  REQUIRE(prop.channel_count() == 7);
  for (int i = 0; i < 3; ++i) {
    const auto e = forward_derivs(p, pairs[static_cast<std::size_t>(i)].x, pairs[static_cast<std::size_t>(i)].xi);
    CHECK(prop.output(0, i) == doctest::Approx(e.value).epsilon(1e-13));
    CHECK(prop.output(1, i) == doctest::Approx(e.grad_x.x1).epsilon(1e-12));
    CHECK(prop.output(2, i) == doctest::Approx(e.grad_x.x2).epsilon(1e-12));
    CHECK(prop.output(3, i) == doctest::Approx(e.grad_xi.x1).epsilon(1e-12));
    CHECK(prop.output(4, i) == doctest::Approx(e.grad_xi.x2).epsilon(1e-12));
    CHECK(prop.output(5, i) == doctest::Approx(e.hess_x_diag.x1).epsilon(1e-12));
    CHECK(prop.output(6, i) == doctest::Approx(e.hess_x_diag.x2).epsilon(1e-12));
  }
}

TEST_CASE("reverse sweep matches parameter finite differences on every channel") {
  for (Activation act : {Activation::sin, Activation::tanh, Activation::sigmoid}) {
    auto p = init_params(3, 6, act, 21);
    for (Eigen::Index i = 0; i < p.parameter_count(); ++i) p.theta()(i) += 0.01 * std::cos(1.0 + i);
    std::vector<SamplePair> pairs{{{0.2, -0.1}, {0.4, 0.3}}, {{-0.6, 0.5}, {0.1, -0.2}}};
    Propagation prop;
    prop.forward(p, pairs, Channels::full);
    Eigen::RowVectorXd seed(prop.channel_count() * 2);
    for (Eigen::Index j = 0; j < seed.size(); ++j) seed(j) = 0.3 + 0.1 * static_cast<double>(j);
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(p.parameter_count());
    prop.backward(p, seed, grad);
    auto functional = [&](const GFNetParams& q) {
      Propagation pr;
      pr.forward(q, pairs, Channels::full);
      return pr.output().dot(seed);
    };
    for (Eigen::Index i = 0; i < p.parameter_count(); ++i) {
      auto plus = p, minus = p;
      plus.theta()(i) += 1e-6;
      minus.theta()(i) -= 1e-6;
      const double ref = (functional(plus) - functional(minus)) / 2e-6;
      CHECK(grad(i) == doctest::Approx(ref).epsilon(1e-5).scale(1.0));
    }
  }
}
