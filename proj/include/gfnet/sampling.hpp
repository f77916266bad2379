#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "gfnet/geometry.hpp"

namespace gfnet {

struct SamplingConfig {
  double s = 0.02;   // Gaussian standard deviation
  double c1 = 5.0;   // fine band: ||x - xi||_inf <= c1 s
  double c2 = 10.0;  // coarse band: ||x - xi||_inf >= c2 s
  double h1 = 0.025, h2 = 0.05, h3 = 0.1;  // fine, mid, coarse x-mesh spacings

  double band1() const { return c1 * s; }
  double band2() const { return c2 * s; }
  /// Throws Error(invalid_argument) unless 0 < c1 < c2, 0 < h1 < h2 < h3, s > 0.
  void validate() const;
};

/// The fine, mid and coarse x-meshes.
struct XMeshes {
  std::array<TriMesh, 3> level;
};

struct XSample {
  Point2 x;
  bool on_boundary = false;
  int level = 1;  // 1 fine, 2 mid, 3 coarse
};

struct SamplePair {
  Point2 x;
  Point2 xi;
};

/// Uniform m x n cells over a rectangle. Cell (row, col) covers
/// [x1_min + col dx, x1_min + (col+1) dx) x [x2_min + row dy, ...), with the last
/// row and column closed. Index = row * n + col.
struct BlockPartition {
  Rect bbox;
  int m = 1;  // rows (x2 direction)
  int n = 1;  // columns (x1 direction)
  std::vector<int> occupied;

  int block_count() const { return m * n; }
  int row_of(Point2 p) const;
  int col_of(Point2 p) const;
  int block_of(Point2 p) const { return row_of(p) * n + col_of(p); }
  Rect block_rect(int index) const;
  bool is_occupied(int index) const;
};

struct BlockDataset {
  int block_index = 0;
  std::vector<Point2> xi_samples;
  std::vector<SamplePair> interior_pairs;  // x strictly interior
  std::vector<SamplePair> boundary_pairs;  // x on the boundary

  std::size_t pair_count() const { return interior_pairs.size() + boundary_pairs.size(); }
};

/// Non-boundary vertices of the xi-mesh, in vertex order.
std::vector<Point2> xi_samples(const TriMesh& mesh);

/// Banded x-samples around xi: fine vertices with ||x - xi||_inf <= c1 s, mid
/// vertices strictly between c1 s and c2 s, coarse vertices at or beyond c2 s.
std::vector<XSample> x_samples_for(Point2 xi, const XMeshes& meshes, const SamplingConfig& cfg);

int band_level(Point2 x, Point2 xi, const SamplingConfig& cfg);

BlockPartition make_partition(const Domain& domain, int m, int n, std::span<const Point2> xis);

/// One dataset per occupied block, in partition.occupied order.
std::vector<BlockDataset> assemble_block_datasets(const BlockPartition& partition,
                                                  std::span<const Point2> xis, const XMeshes& meshes,
                                                  const SamplingConfig& cfg);

XMeshes make_x_meshes(const Domain& domain, const SamplingConfig& cfg);

// GFSAMP 1: one `x1 x2 xi1 xi2 bflag block` line per pair.
void write_samples(std::ostream& out, std::span<const BlockDataset> blocks);

}  // namespace gfnet
