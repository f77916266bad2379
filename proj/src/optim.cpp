#include "gfnet/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace gfnet {

void adam_step(AdamState& state, Eigen::Ref<Eigen::VectorXd> x, const Eigen::VectorXd& grad, const AdamConfig& cfg) {
  if (state.m.size() != x.size()) state = AdamState(x.size());
  ++state.t;
  state.m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * grad;
  state.v = cfg.beta2 * state.v + (1.0 - cfg.beta2) * grad.cwiseAbs2();
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
  const double step = cfg.lr / bc1;
  x.array() -= step * state.m.array() / ((state.v.array() / bc2).sqrt() + cfg.eps);
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::tolerance: return "tolerance";
    case StopReason::max_steps: return "max_steps";
    case StopReason::line_search_failure: return "line_search_failure";
  }
  return "?";
}

namespace {

double cubic_minimizer(double x1, double f1, double g1, double x2, double f2, double g2, double lo, double hi) {
  const double d1 = g1 + g2 - 3.0 * (f1 - f2) / (x1 - x2);
  const double d2_sq = d1 * d1 - g1 * g2;
  if (d2_sq >= 0.0) {
    const double d2 = std::sqrt(d2_sq);
    const double t = x1 <= x2 ? x2 - (x2 - x1) * ((g2 + d2 - d1) / (g2 - g1 + 2.0 * d2))
                              : x1 - (x1 - x2) * ((g1 + d2 - d1) / (g1 - g2 + 2.0 * d2));
    if (std::isfinite(t)) return std::clamp(t, lo, hi);
  }
  return 0.5 * (lo + hi);
}

double cubic_minimizer(double x1, double f1, double g1, double x2, double f2, double g2) {
  return cubic_minimizer(x1, f1, g1, x2, f2, g2, std::min(x1, x2), std::max(x1, x2));
}

struct Trial {
  double t = 0.0;
  double f = 0.0;
  double gtd = 0.0;
  Eigen::VectorXd g;
};

struct LineSearchResult {
  Trial best;
  int evaluations = 0;
  bool wolfe = false;
};

LineSearchResult strong_wolfe(const Objective& obj, const Eigen::VectorXd& x, const Eigen::VectorXd& d,
                              const Trial& start, double t, const LbfgsOptions& o) {
  const double d_norm = d.cwiseAbs().maxCoeff();
  const double f0 = start.f, gtd0 = start.gtd;
  LineSearchResult out;
  auto eval = [&](double step) {
    Trial tr;
    tr.t = step;
    tr.g.resize(x.size());
    tr.f = obj(x + step * d, tr.g);
    tr.gtd = tr.g.dot(d);
    ++out.evaluations;
    return tr;
  };
  auto sufficient = [&](const Trial& tr) { return tr.f <= f0 + o.c1 * tr.t * gtd0; };
  auto curvature = [&](const Trial& tr) { return std::abs(tr.gtd) <= -o.c2 * gtd0; };

  Trial prev = start;
  Trial cur = eval(t);
  Trial lo, hi;
  bool bracketed = false;
  while (true) {
    if (!std::isfinite(cur.f) || !sufficient(cur) || (out.evaluations > 1 && cur.f >= prev.f)) {
      lo = prev;
      hi = cur;
      bracketed = true;
      break;
    }
    if (curvature(cur)) {
      out.best = cur;
      out.wolfe = true;
      return out;
    }
    if (cur.gtd >= 0.0) {
      lo = cur;
      hi = prev;
      bracketed = true;
      break;
    }
    if (out.evaluations >= o.max_line_search_evals) break;
    const double next = cubic_minimizer(prev.t, prev.f, prev.gtd, cur.t, cur.f, cur.gtd,
                                        cur.t + 0.01 * (cur.t - prev.t), cur.t * 10.0);
    prev = std::move(cur);
    cur = eval(next);
  }
  if (!bracketed) {
    out.best = cur.f < start.f ? cur : start;
    return out;
  }
  if (!std::isfinite(hi.f)) {
    hi.f = std::numeric_limits<double>::max();
    hi.gtd = 0.0;
  }

  bool insufficient_progress = false;
  while (out.evaluations < o.max_line_search_evals) {
    if (std::abs(hi.t - lo.t) * d_norm < 1e-12) break;
    const double a = std::min(lo.t, hi.t), b = std::max(lo.t, hi.t);
    double step = std::isfinite(hi.f) && hi.f < std::numeric_limits<double>::max()
                      ? cubic_minimizer(lo.t, lo.f, lo.gtd, hi.t, hi.f, hi.gtd)
                      : 0.5 * (a + b);
    const double eps = 0.1 * (b - a);
    if (std::min(b - step, step - a) < eps) {
      if (insufficient_progress || step >= b || step <= a) {
        step = std::abs(step - b) < std::abs(step - a) ? b - eps : a + eps;
        insufficient_progress = false;
      } else {
        insufficient_progress = true;
      }
    } else {
      insufficient_progress = false;
    }
    Trial tr = eval(step);
    if (!std::isfinite(tr.f) || !sufficient(tr) || tr.f >= lo.f) {
      hi = std::move(tr);
      if (!std::isfinite(hi.f)) {
        hi.f = std::numeric_limits<double>::max();
        hi.gtd = 0.0;
      }
    } else {
      if (curvature(tr)) {
        out.best = std::move(tr);
        out.wolfe = true;
        return out;
      }
      if (tr.gtd * (hi.t - lo.t) >= 0.0) hi = lo;
      lo = std::move(tr);
    }
  }
  out.best = lo.f < start.f ? lo : start;
  return out;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& objective, Eigen::VectorXd x0, const LbfgsOptions& opts,
                           const std::function<void(int, double)>& on_step) {
  LbfgsResult res;
  res.x = std::move(x0);
  res.grad.resize(res.x.size());
  res.f = objective(res.x, res.grad);
  res.evaluations = 1;
  auto converged = [&] { return res.f <= opts.tol || res.grad.cwiseAbs().maxCoeff() <= opts.grad_tol; };
  if (converged()) {
    res.stop = StopReason::tolerance;
    return res;
  }

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  double h_diag = 1.0;
  Eigen::VectorXd d(res.x.size());
  std::vector<double> alpha;

  for (int step = 1; step <= opts.max_steps; ++step) {
    d = -res.grad;
    const std::size_t m = s_hist.size();
    alpha.assign(m, 0.0);
    for (std::size_t k = m; k-- > 0;) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(d);
      d -= alpha[k] * y_hist[k];
    }
    d *= h_diag;
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(d);
      d += (alpha[k] - beta) * s_hist[k];
    }
    double gtd = res.grad.dot(d);
    if (!(gtd < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      h_diag = 1.0;
      d = -res.grad;
      gtd = res.grad.dot(d);
    }

    Trial start{0.0, res.f, gtd, res.grad};
    LineSearchResult ls = strong_wolfe(objective, res.x, d, start, opts.initial_step, opts);
    res.evaluations += ls.evaluations;
    res.steps = step;
    const bool moved = ls.best.t > 0.0 && ls.best.f < res.f;
    if (moved) {
      Eigen::VectorXd s = ls.best.t * d;
      Eigen::VectorXd y = ls.best.g - res.grad;
      const double ys = y.dot(s);
      if (ys > 1e-10) {
        if (static_cast<int>(s_hist.size()) == opts.memory) {
          s_hist.pop_front();
          y_hist.pop_front();
          rho_hist.pop_front();
        }
        h_diag = ys / y.squaredNorm();
        s_hist.push_back(std::move(s));
        y_hist.push_back(std::move(y));
        rho_hist.push_back(1.0 / ys);
        res.x += s_hist.back();
      } else {
        res.x += ls.best.t * d;
      }
      res.f = ls.best.f;
      res.grad = ls.best.g;
    }
    if (on_step) on_step(step, res.f);
    if (converged()) {
      res.stop = StopReason::tolerance;
      return res;
    }
    if (!moved) {
      res.stop = StopReason::line_search_failure;
      return res;
    }
  }
  res.stop = StopReason::max_steps;
  return res;
}

}  // namespace gfnet
