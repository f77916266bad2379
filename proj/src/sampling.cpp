#include "gfnet/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "gfnet/error.hpp"
#include "gfnet/text_io.hpp"

namespace gfnet {

void SamplingConfig::validate() const {
  if (!(s > 0.0)) throw Error(ErrorKind::invalid_argument, "sampling.s must be positive");
  if (!(c1 > 0.0 && c1 < c2)) throw Error(ErrorKind::invalid_argument, "sampling needs 0 < c1 < c2");
  if (!(h1 > 0.0 && h1 < h2 && h2 < h3))
    throw Error(ErrorKind::invalid_argument, "sampling needs 0 < h1 < h2 < h3");
}

std::vector<Point2> xi_samples(const TriMesh& mesh) {
  std::vector<Point2> out;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    if (!mesh.is_boundary_vertex[i]) out.push_back(mesh.vertices[i]);
  if (out.empty()) throw Error(ErrorKind::empty_sample_set, "xi-mesh has no interior vertex");
  return out;
}

int band_level(Point2 x, Point2 xi, const SamplingConfig& cfg) {
  const double d = norm_inf(x - xi);
  if (d <= cfg.band1()) return 1;
  if (d < cfg.band2()) return 2;
  return 3;
}

std::vector<XSample> x_samples_for(Point2 xi, const XMeshes& meshes, const SamplingConfig& cfg) {
  std::vector<XSample> out;
  bool any_level1 = false, any_coarse_boundary = false;
  for (int level = 1; level <= 3; ++level) {
    const TriMesh& mesh = meshes.level[static_cast<std::size_t>(level - 1)];
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
      if (band_level(mesh.vertices[i], xi, cfg) != level) continue;
      out.push_back({mesh.vertices[i], mesh.is_boundary_vertex[i], level});
      any_level1 |= level == 1;
      any_coarse_boundary |= level == 3 && mesh.is_boundary_vertex[i];
    }
  }
  if (!any_level1)
    throw Error(ErrorKind::degenerate_sampling, "fine x-mesh has no vertex within c1*s of xi");
  if (!any_coarse_boundary)
    throw Error(ErrorKind::degenerate_sampling, "no coarse boundary x-sample for xi");
  return out;
}

int BlockPartition::row_of(Point2 p) const {
  const int r = static_cast<int>(std::floor((p.x2 - bbox.x2_min) * m / bbox.height()));
  return std::clamp(r, 0, m - 1);
}

int BlockPartition::col_of(Point2 p) const {
  const int c = static_cast<int>(std::floor((p.x1 - bbox.x1_min) * n / bbox.width()));
  return std::clamp(c, 0, n - 1);
}

Rect BlockPartition::block_rect(int index) const {
  const int row = index / n, col = index % n;
  const double dx = bbox.width() / n, dy = bbox.height() / m;
  return {bbox.x1_min + col * dx, col == n - 1 ? bbox.x1_max : bbox.x1_min + (col + 1) * dx,
          bbox.x2_min + row * dy, row == m - 1 ? bbox.x2_max : bbox.x2_min + (row + 1) * dy};
}

bool BlockPartition::is_occupied(int index) const {
  return std::binary_search(occupied.begin(), occupied.end(), index);
}

BlockPartition make_partition(const Domain& domain, int m, int n, std::span<const Point2> xis) {
  if (m < 1 || n < 1) throw Error(ErrorKind::invalid_argument, "partition needs m, n >= 1");
  if (xis.empty()) throw Error(ErrorKind::empty_sample_set, "partition needs at least one xi");
  BlockPartition part;
  part.bbox = domain.bounding_box();
  part.m = m;
  part.n = n;
  std::vector<bool> used(static_cast<std::size_t>(m * n), false);
  for (const Point2& xi : xis) used[static_cast<std::size_t>(part.block_of(xi))] = true;
  for (int k = 0; k < m * n; ++k)
    if (used[static_cast<std::size_t>(k)]) part.occupied.push_back(k);
  return part;
}

XMeshes make_x_meshes(const Domain& domain, const SamplingConfig& cfg) {
  cfg.validate();
  return {{generate_mesh(domain, cfg.h1), generate_mesh(domain, cfg.h2), generate_mesh(domain, cfg.h3)}};
}

std::vector<BlockDataset> assemble_block_datasets(const BlockPartition& partition,
                                                  std::span<const Point2> xis, const XMeshes& meshes,
                                                  const SamplingConfig& cfg) {
  cfg.validate();
  std::vector<BlockDataset> out;
  out.reserve(partition.occupied.size());
  for (int k : partition.occupied) {
    BlockDataset ds;
    ds.block_index = k;
    out.push_back(std::move(ds));
  }
  auto slot = [&](int block) -> BlockDataset& {
    auto it = std::lower_bound(partition.occupied.begin(), partition.occupied.end(), block);
    return out[static_cast<std::size_t>(it - partition.occupied.begin())];
  };
  for (const Point2& xi : xis) {
    BlockDataset& ds = slot(partition.block_of(xi));
    ds.xi_samples.push_back(xi);
    for (const XSample& xs : x_samples_for(xi, meshes, cfg))
      (xs.on_boundary ? ds.boundary_pairs : ds.interior_pairs).push_back({xs.x, xi});
  }
  return out;
}

void write_samples(std::ostream& out, std::span<const BlockDataset> blocks) {
  out << "GFSAMP 1\n";
  for (const auto& ds : blocks) {
    auto line = [&](const SamplePair& p, int flag) {
      out << format_double(p.x.x1) << ' ' << format_double(p.x.x2) << ' ' << format_double(p.xi.x1) << ' '
          << format_double(p.xi.x2) << ' ' << flag << ' ' << ds.block_index << '\n';
    };
    for (const auto& p : ds.interior_pairs) line(p, 0);
    for (const auto& p : ds.boundary_pairs) line(p, 1);
  }
}

}  // namespace gfnet
