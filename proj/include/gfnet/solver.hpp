#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gfnet/geometry.hpp"
#include "gfnet/model.hpp"
#include "gfnet/pde.hpp"
#include "gfnet/sampling.hpp"

namespace gfnet {

/// Kernel of the representation formula: G(q, x_hat) as a function of the
/// integration point q for one target x_hat.
class GreenKernel {
 public:
  virtual ~GreenKernel() = default;
  virtual void values(std::span<const Point2> q, Point2 x_hat, std::span<double> out) const = 0;
  /// grad_q G(q, x_hat) . n for each point and its normal.
  virtual void normal_derivatives(std::span<const Point2> q, std::span<const Point2> n, Point2 x_hat,
                                  std::span<double> out) const = 0;
};

/// Trained model with the roles swapped: the network of the block holding
/// x_hat is evaluated with q in its x slot and x_hat in its xi slot, relying
/// on the learned symmetry G(q, x_hat) = G(x_hat, q).
class LearnedKernel final : public GreenKernel {
 public:
  explicit LearnedKernel(const GreensModel& model) : model_(model) {}
  void values(std::span<const Point2> q, Point2 x_hat, std::span<double> out) const override;
  void normal_derivatives(std::span<const Point2> q, std::span<const Point2> n, Point2 x_hat,
                          std::span<double> out) const override;

 private:
  const GreensModel& model_;
};

/// Closed-form Green's function of -lap on the unit disk.
class DiskGreenKernel final : public GreenKernel {
 public:
  void values(std::span<const Point2> q, Point2 x_hat, std::span<double> out) const override;
  void normal_derivatives(std::span<const Point2> q, std::span<const Point2> n, Point2 x_hat,
                          std::span<double> out) const override;
};

/// Quadrature points of the representation formula on one mesh, with the
/// problem data folded into the weights: volume weights are w |T| f(q),
/// boundary weights w |E| g(q) a(q).
struct QuadraturePlan {
  std::vector<Point2> volume_points;
  std::vector<double> volume_weights;
  std::vector<Point2> boundary_points;
  std::vector<Point2> boundary_normals;
  std::vector<double> boundary_weights;
};

QuadraturePlan make_plan(const ProblemSpec& problem, const TriMesh& quad_mesh);

/// u(x_hat) = sum w f G - sum w g a (grad G . n). Throws Error(invalid_argument)
/// unless x_hat is strictly inside `domain`.
double solve_at(const GreenKernel& kernel, const QuadraturePlan& plan, const Domain& domain, Point2 x_hat);
double solve_at(const GreensModel& model, const ProblemSpec& problem, const TriMesh& quad_mesh, Point2 x_hat);

struct FieldSolution {
  std::vector<double> values;       // NaN where the point failed
  std::vector<std::string> errors;  // empty string where the point succeeded

  bool ok() const;
};

/// solve_at for every point on up to `workers` threads; results do not depend on `workers`.
FieldSolution solve_field(const GreenKernel& kernel, const QuadraturePlan& plan, const Domain& domain,
                          std::span<const Point2> points, int workers = 1);

/// sqrt(sum w (e - p)^2 / sum w e^2). Throws Error(zero_denominator) when the
/// exact values vanish on the weighted set.
double relative_l2_error(std::span<const double> exact, std::span<const double> predicted,
                         std::span<const double> weights);

/// Points of the 201 x 201 lattice on [-1, 1]^2 inside the closed unit disk
/// and outside the open ball of radius 3s around the origin.
std::vector<Point2> green_error_points(double s);

/// Unweighted relative l2 error of `prediction` against the disk Green's
/// function with source at the origin, over green_error_points(s).
double green_error_disk(const std::function<double(Point2)>& prediction, double s);

/// Every fourth lattice point of green_error_points, paired with the origin.
std::vector<SamplePair> disk_probe_pairs(double s);

/// mean (G(x, xi) - G(xi, x))^2 over the probe pairs.
double asymmetry_measure(const GFNetParams& params, std::span<const SamplePair> probes);

/// Integral of f over the mesh with the four-point triangle rule.
double integrate(const TriMesh& mesh, const std::function<double(Point2)>& f);

}  // namespace gfnet
