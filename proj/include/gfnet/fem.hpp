#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "gfnet/geometry.hpp"
#include "gfnet/pde.hpp"

namespace gfnet {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Full P1 system over every mesh vertex, before boundary conditions.
struct SparseSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<Point2> vertices;
  std::vector<bool> dirichlet;  // boundary vertices
};

/// Stiffness a grad(phi_i).grad(phi_j) + r phi_i phi_j and load f phi_i, all
/// integrated with the four-point triangle rule.
SparseSystem assemble(const TriMesh& mesh, const ScalarField& a, const ScalarField& r,
                      const std::function<double(Point2)>& f);

/// System on the non-Dirichlet vertices after eliminating the boundary values.
struct ReducedSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<int> unknowns;  // vertex index of each unknown
  Eigen::VectorXd values;     // full-length vector holding g at Dirichlet vertices
};

ReducedSystem apply_dirichlet(const SparseSystem& system, const std::function<double(Point2)>& g);

struct CgOptions {
  double tol = 1e-10;  // on ||r|| / ||b||
  int max_iterations = -1;  // -1: ten times the system size
};

struct CgReport {
  int iterations = 0;
  double relative_residual = 0.0;
  double min_rayleigh = 0.0;          // smallest p'Ap / p'p seen
  std::vector<double> rz_history;     // r'z after each iteration, z = M^-1 r
  std::vector<double> energy_history; // x'Ax / 2 - b'x after each iteration
};

/// Jacobi-preconditioned conjugate gradients from x = 0. Throws
/// Error(cg_nonconvergence) when the iteration limit is reached.
Eigen::VectorXd pcg(const SparseMatrix& a, const Eigen::VectorXd& b, const CgOptions& opts, CgReport* report = nullptr);

struct FemSolution {
  std::vector<double> values;  // per mesh vertex
  CgReport report;
  double seconds = 0.0;
};

FemSolution fem_solve(const TriMesh& mesh, const ProblemSpec& problem, const CgOptions& opts = {});

}  // namespace gfnet
