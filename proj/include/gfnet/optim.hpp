#pragma once

#include <functional>
#include <string_view>

#include <Eigen/Core>

namespace gfnet {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  Eigen::VectorXd m, v;
  long t = 0;

  AdamState() = default;
  explicit AdamState(Eigen::Index n) : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}
};

/// One bias-corrected Adam update of `x` in place.
void adam_step(AdamState& state, Eigen::Ref<Eigen::VectorXd> x, const Eigen::VectorXd& grad, const AdamConfig& cfg);

enum class StopReason { tolerance, max_steps, line_search_failure };

std::string_view to_string(StopReason r);

/// f(x), writing the gradient into `grad`.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct LbfgsOptions {
  int memory = 20;
  int max_steps = 10000;
  double tol = 1e-4;        // stop once f <= tol
  double grad_tol = 1e-12;  // or once max |grad| <= grad_tol
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_line_search_evals = 25;
  double initial_step = 1.0;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  Eigen::VectorXd grad;
  double f = 0.0;
  int steps = 0;
  int evaluations = 0;
  StopReason stop = StopReason::max_steps;
};

/// Limited-memory BFGS with a strong-Wolfe line search (bracketing followed by
/// safeguarded cubic zoom). The objective never increases between accepted
/// iterates. A line search that ends without the Wolfe conditions but with a
/// decrease is accepted; one that finds no decrease stops the run at the best
/// point so far.
/// `on_step(step, f)` is called after every iteration.
LbfgsResult lbfgs_minimize(const Objective& objective, Eigen::VectorXd x0, const LbfgsOptions& opts,
                           const std::function<void(int, double)>& on_step = {});

}  // namespace gfnet
