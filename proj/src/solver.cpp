#include "gfnet/solver.hpp"

#include <cmath>
#include <limits>

#include "gfnet/error.hpp"
#include "gfnet/network.hpp"
#include "gfnet/parallel.hpp"
#include "gfnet/quadrature.hpp"

namespace gfnet {

namespace {

constexpr std::size_t kChunk = 256;

std::vector<SamplePair> pairs_with(std::span<const Point2> q, Point2 x_hat) {
  std::vector<SamplePair> out;
  out.reserve(q.size());
  for (const Point2 p : q) out.push_back({p, x_hat});
  return out;
}

}  // namespace

void LearnedKernel::values(std::span<const Point2> q, Point2 x_hat, std::span<double> out) const {
  const GFNetParams& net = model_.network_for(x_hat);
  const auto pairs = pairs_with(q, x_hat);
  const std::span<const SamplePair> all(pairs);
  Propagation prop;
  for (std::size_t start = 0; start < all.size(); start += kChunk) {
    const std::size_t len = std::min(kChunk, all.size() - start);
    prop.forward(net, all.subspan(start, len), Channels::value);
    for (std::size_t i = 0; i < len; ++i) out[start + i] = prop.output(0, static_cast<int>(i));
  }
}

void LearnedKernel::normal_derivatives(std::span<const Point2> q, std::span<const Point2> n, Point2 x_hat,
                                       std::span<double> out) const {
  const GFNetParams& net = model_.network_for(x_hat);
  const auto pairs = pairs_with(q, x_hat);
  const std::span<const SamplePair> all(pairs);
  Propagation prop;
  for (std::size_t start = 0; start < all.size(); start += kChunk) {
    const std::size_t len = std::min(kChunk, all.size() - start);
    prop.forward(net, all.subspan(start, len), Channels::x_derivs);
    for (std::size_t i = 0; i < len; ++i) {
      const int k = static_cast<int>(i);
      out[start + i] = prop.output(1, k) * n[start + i].x1 + prop.output(2, k) * n[start + i].x2;
    }
  }
}

void DiskGreenKernel::values(std::span<const Point2> q, Point2 x_hat, std::span<double> out) const {
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = disk_green(q[i], x_hat);
}

void DiskGreenKernel::normal_derivatives(std::span<const Point2> q, std::span<const Point2> n, Point2 x_hat,
                                         std::span<double> out) const {
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = dot(disk_green_grad_x(q[i], x_hat), n[i]);
}

QuadraturePlan make_plan(const ProblemSpec& problem, const TriMesh& mesh) {
  QuadraturePlan plan;
  const TriQuadRule& tr = triangle_rule();
  for (const auto& t : mesh.triangles) {
    const Point2 a = mesh.vertices[static_cast<std::size_t>(t[0])], b = mesh.vertices[static_cast<std::size_t>(t[1])],
                 c = mesh.vertices[static_cast<std::size_t>(t[2])];
    const double area = std::abs(signed_area(a, b, c));
    if (!(area > 0.0)) throw Error(ErrorKind::degenerate_triangle, "quadrature mesh has a zero-area triangle");
    const auto pts = map_points(tr, a, b, c);
    for (std::size_t q = 0; q < 4; ++q) {
      plan.volume_points.push_back(pts[q]);
      plan.volume_weights.push_back(tr.weight[q] * area * problem.f(pts[q]));
    }
  }
  const EdgeQuadRule& er = edge_rule();
  for (const auto& e : mesh.boundary_edges) {
    const Point2 a = mesh.vertices[static_cast<std::size_t>(e.v[0])], b = mesh.vertices[static_cast<std::size_t>(e.v[1])];
    const double len = norm(b - a);
    if (!(len > 0.0)) throw Error(ErrorKind::zero_length_edge, "quadrature mesh has a zero-length boundary edge");
    const auto pts = map_points(er, a, b);
    for (std::size_t q = 0; q < 3; ++q) {
      plan.boundary_points.push_back(pts[q]);
      plan.boundary_normals.push_back(e.normal);
      plan.boundary_weights.push_back(er.weight[q] * len * problem.g(pts[q]) * problem.a.value(pts[q]));
    }
  }
  return plan;
}

double solve_at(const GreenKernel& kernel, const QuadraturePlan& plan, const Domain& domain, Point2 x_hat) {
  if (!(domain.signed_distance(x_hat) < 0.0))
    throw Error(ErrorKind::invalid_argument, "evaluation point is not strictly inside the domain");
  std::vector<double> g(plan.volume_points.size());
  kernel.values(plan.volume_points, x_hat, g);
  double u = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) u += plan.volume_weights[i] * g[i];
  bool any_boundary = false;
  for (double w : plan.boundary_weights) any_boundary = any_boundary || w != 0.0;
  if (any_boundary) {
    std::vector<double> dn(plan.boundary_points.size());
    kernel.normal_derivatives(plan.boundary_points, plan.boundary_normals, x_hat, dn);
    for (std::size_t i = 0; i < dn.size(); ++i) u -= plan.boundary_weights[i] * dn[i];
  }
  return u;
}

double solve_at(const GreensModel& model, const ProblemSpec& problem, const TriMesh& quad_mesh, Point2 x_hat) {
  if (!(model.domain == problem.domain)) throw Error(ErrorKind::domain_mismatch, "problem and model domains differ");
  return solve_at(LearnedKernel(model), make_plan(problem, quad_mesh), problem.domain, x_hat);
}

bool FieldSolution::ok() const {
  for (const auto& e : errors)
    if (!e.empty()) return false;
  return true;
}

FieldSolution solve_field(const GreenKernel& kernel, const QuadraturePlan& plan, const Domain& domain,
                          std::span<const Point2> points, int workers) {
  FieldSolution out;
  out.values.assign(points.size(), std::numeric_limits<double>::quiet_NaN());
  out.errors.assign(points.size(), {});
  parallel_for(points.size(), workers, [&](std::size_t i) {
    try {
      out.values[i] = solve_at(kernel, plan, domain, points[i]);
    } catch (const std::exception& e) {
      out.errors[i] = e.what();
    }
  });
  return out;
}

double relative_l2_error(std::span<const double> exact, std::span<const double> predicted,
                         std::span<const double> weights) {
  if (exact.size() != predicted.size() || exact.size() != weights.size())
    throw Error(ErrorKind::invalid_argument, "error vectors differ in length");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const double d = exact[i] - predicted[i];
    num += weights[i] * d * d;
    den += weights[i] * exact[i] * exact[i];
  }
  if (!(den > 0.0)) throw Error(ErrorKind::zero_denominator, "exact solution vanishes on the evaluation set");
  return std::sqrt(num / den);
}

std::vector<Point2> green_error_points(double s) {
  std::vector<Point2> pts;
  const double r_min = 3.0 * s;
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j <= 200; ++j) {
      const Point2 p{-1.0 + 0.01 * i, -1.0 + 0.01 * j};
      const double r = norm(p);
      if (r <= 1.0 && r >= r_min) pts.push_back(p);
    }
  }
  return pts;
}

double green_error_disk(const std::function<double(Point2)>& prediction, double s) {
  double num = 0.0, den = 0.0;
  for (const Point2 p : green_error_points(s)) {
    const double e = analytic_green_disk(p);
    const double d = prediction(p) - e;
    num += d * d;
    den += e * e;
  }
  return std::sqrt(num / den);
}

std::vector<SamplePair> disk_probe_pairs(double s) {
  const auto pts = green_error_points(s);
  std::vector<SamplePair> out;
  for (std::size_t i = 0; i < pts.size(); i += 4) out.push_back({pts[i], {0.0, 0.0}});
  return out;
}

double asymmetry_measure(const GFNetParams& params, std::span<const SamplePair> probes) {
  if (probes.empty()) throw Error(ErrorKind::empty_sample_set, "no probe pairs");
  std::vector<SamplePair> swapped;
  swapped.reserve(probes.size());
  for (const auto& p : probes) swapped.push_back({p.xi, p.x});
  const auto a = batch_values(params, probes);
  const auto b = batch_values(params, swapped);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return sum / static_cast<double>(a.size());
}

double integrate(const TriMesh& mesh, const std::function<double(Point2)>& f) {
  const TriQuadRule& rule = triangle_rule();
  double sum = 0.0;
  for (const auto& t : mesh.triangles)
    sum += tri_quad(rule, mesh.vertices[static_cast<std::size_t>(t[0])], mesh.vertices[static_cast<std::size_t>(t[1])],
                    mesh.vertices[static_cast<std::size_t>(t[2])], f);
  return sum;
}

}  // namespace gfnet
