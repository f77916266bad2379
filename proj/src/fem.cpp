#include "gfnet/fem.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "gfnet/error.hpp"
#include "gfnet/quadrature.hpp"

namespace gfnet {

SparseSystem assemble(const TriMesh& mesh, const ScalarField& a, const ScalarField& r,
                      const std::function<double(Point2)>& f) {
  const auto n = static_cast<Eigen::Index>(mesh.vertices.size());
  SparseSystem sys;
  sys.vertices = mesh.vertices;
  sys.dirichlet = mesh.is_boundary_vertex;
  sys.rhs = Eigen::VectorXd::Zero(n);
  const TriQuadRule& rule = triangle_rule();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(mesh.triangles.size() * 9);
  for (const auto& t : mesh.triangles) {
    std::array<Point2, 3> p;
    for (int i = 0; i < 3; ++i) p[static_cast<std::size_t>(i)] = mesh.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])];
    const double area2 = cross(p[0], p[1], p[2]);
    if (!(area2 > 0.0)) throw Error(ErrorKind::degenerate_triangle, "triangle with non-positive area");
    const double area = 0.5 * area2;
    // grad phi_i = perp(p_{i+2} - p_{i+1}) / (2 area)
    std::array<Point2, 3> grad;
    for (std::size_t i = 0; i < 3; ++i) {
      const Point2 e = p[(i + 2) % 3] - p[(i + 1) % 3];
      grad[i] = {-e.x2 / area2, e.x1 / area2};
    }
    const auto qp = map_points(rule, p[0], p[1], p[2]);
    double a_mean = 0.0;
    std::array<double, 4> rq{}, fq{};
    for (std::size_t q = 0; q < 4; ++q) {
      a_mean += rule.weight[q] * a.value(qp[q]);
      rq[q] = r.value(qp[q]);
      fq[q] = f(qp[q]);
    }
    for (std::size_t i = 0; i < 3; ++i) {
      double load = 0.0;
      for (std::size_t q = 0; q < 4; ++q) load += rule.weight[q] * fq[q] * rule.bary[q][i];
      sys.rhs(t[i]) += area * load;
      for (std::size_t j = 0; j < 3; ++j) {
        double mass = 0.0;
        for (std::size_t q = 0; q < 4; ++q) mass += rule.weight[q] * rq[q] * rule.bary[q][i] * rule.bary[q][j];
        entries.emplace_back(t[i], t[j], area * (a_mean * dot(grad[i], grad[j]) + mass));
      }
    }
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(entries.begin(), entries.end());
  return sys;
}

ReducedSystem apply_dirichlet(const SparseSystem& sys, const std::function<double(Point2)>& g) {
  const auto n = sys.matrix.rows();
  ReducedSystem red;
  red.values = Eigen::VectorXd::Zero(n);
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  for (Eigen::Index v = 0; v < n; ++v) {
    if (sys.dirichlet[static_cast<std::size_t>(v)]) {
      red.values(v) = g(sys.vertices[static_cast<std::size_t>(v)]);
    } else {
      index[static_cast<std::size_t>(v)] = static_cast<int>(red.unknowns.size());
      red.unknowns.push_back(static_cast<int>(v));
    }
  }
  const auto m = static_cast<Eigen::Index>(red.unknowns.size());
  red.rhs.resize(m);
  std::vector<Eigen::Triplet<double>> entries;
  for (Eigen::Index i = 0; i < m; ++i) {
    const int v = red.unknowns[static_cast<std::size_t>(i)];
    double b = sys.rhs(v);
    for (SparseMatrix::InnerIterator it(sys.matrix, v); it; ++it) {
      const int j = index[static_cast<std::size_t>(it.col())];
      if (j >= 0)
        entries.emplace_back(i, j, it.value());
      else
        b -= it.value() * red.values(it.col());
    }
    red.rhs(i) = b;
  }
  red.matrix.resize(m, m);
  red.matrix.setFromTriplets(entries.begin(), entries.end());
  return red;
}

Eigen::VectorXd pcg(const SparseMatrix& a, const Eigen::VectorXd& b, const CgOptions& opts, CgReport* report) {
  const Eigen::Index n = b.size();
  CgReport rep;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double b_norm = b.norm();
  if (n == 0 || b_norm == 0.0) {
    if (report) *report = rep;
    return x;
  }
  const Eigen::VectorXd inv_diag = a.diagonal().cwiseInverse();
  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd ap(n);
  double rz = r.dot(z);
  rep.min_rayleigh = std::numeric_limits<double>::infinity();
  const int limit = opts.max_iterations >= 0 ? opts.max_iterations : static_cast<int>(10 * n);
  double energy = 0.0;
  for (int k = 1; k <= limit; ++k) {
    ap.noalias() = a * p;
    const double pap = p.dot(ap);
    rep.min_rayleigh = std::min(rep.min_rayleigh, pap / p.squaredNorm());
    const double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    // E(x + alpha p) - E(x) = -alpha r_old'p / 2 = -alpha rz / 2 for CG
    energy -= 0.5 * alpha * rz;
    z = inv_diag.cwiseProduct(r);
    const double rz_new = r.dot(z);
    rep.iterations = k;
    rep.rz_history.push_back(rz_new);
    rep.energy_history.push_back(energy);
    rep.relative_residual = r.norm() / b_norm;
    if (rep.relative_residual <= opts.tol) {
      if (report) *report = rep;
      return x;
    }
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  if (report) *report = rep;
  throw Error(ErrorKind::cg_nonconvergence,
              "CG did not reach the tolerance in " + std::to_string(limit) + " iterations");
}

FemSolution fem_solve(const TriMesh& mesh, const ProblemSpec& problem, const CgOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const SparseSystem sys = assemble(mesh, problem.a, problem.r, problem.f);
  ReducedSystem red = apply_dirichlet(sys, problem.g);
  FemSolution out;
  const Eigen::VectorXd u = pcg(red.matrix, red.rhs, opts, &out.report);
  for (std::size_t i = 0; i < red.unknowns.size(); ++i) red.values(red.unknowns[i]) = u(static_cast<Eigen::Index>(i));
  out.values.assign(red.values.data(), red.values.data() + red.values.size());
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace gfnet
