#pragma once

#include <vector>

#include "gfnet/config.hpp"
#include "gfnet/geometry.hpp"
#include "gfnet/model.hpp"
#include "gfnet/pde.hpp"
#include "gfnet/sampling.hpp"
#include "gfnet/training.hpp"

namespace gfnet {

Domain make_domain(const RunConfig& cfg);

/// Built-in problem on the configured domain; a configured `a` or `r`
/// replaces the default coefficient and the data are re-manufactured.
ProblemSpec make_problem(const RunConfig& cfg);

struct MeshSet {
  TriMesh xi;
  XMeshes x;
  std::vector<TriMesh> quad;  // one per configured quadrature spacing
};

MeshSet build_meshes(const RunConfig& cfg, const Domain& domain);

/// The configured fixed source, or else the interior vertices of the xi-mesh.
std::vector<Point2> source_points(const RunConfig& cfg, const TriMesh& xi_mesh);

struct TrainingSet {
  BlockPartition partition;
  std::vector<BlockDataset> blocks;
};

/// Datasets for mollifier width `s` (the band radii scale with it).
TrainingSet build_training_set(const RunConfig& cfg, const Domain& domain, const MeshSet& meshes, double s);

/// One single-source disk training with the configured settings.
struct DiskVariant {
  GreensModel model;
  TrainReport report;
  double green_error = 0.0;
  double asymmetry = 0.0;
};

DiskVariant train_disk_variant(const RunConfig& cfg, const MeshSet& meshes);

}  // namespace gfnet
