#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gfnet/geometry.hpp"
#include "gfnet/network.hpp"
#include "gfnet/sampling.hpp"

namespace gfnet {

/// One trained network per occupied xi-block.
struct GreensModel {
  Domain domain;
  BlockPartition partition;
  double s = 0.02;
  std::map<int, GFNetParams> blocks;
  bool partial = false;                // some block failed to train
  std::vector<std::string> lineage;    // one line per training or fine-tuning run

  /// Network of the block containing `p`; throws Error(unoccupied_block).
  const GFNetParams& network_for(Point2 p) const;
  /// G(x, xi) from the network of the block containing xi.
  double value(Point2 x, Point2 xi) const;
};

// GFNET 1 text format, one network:
//   GFNET 1
//   activation <sin|tanh|sigmoid>
//   placement <all_hidden|skip_last_hidden>
//   depth <D> width <W>
//   s <s>
//   block <index>
//   rect <x1_min> <x1_max> <x2_min> <x2_max>
//   then per layer: `layer <k> <rows> <cols>`, the weight row by row, `bias` and the bias
// Doubles are written in shortest round-trip form, so loading is value-exact.
struct NetworkFile {
  GFNetParams params;
  double s = 0.0;
  int block = 0;
  Rect rect;
};

void write_network(std::ostream& out, const NetworkFile& file);
NetworkFile read_network(std::istream& in);

/// Writes `manifest.gfm` plus one `block_<k>.gfnet` per trained block into `dir`.
void save_model(const std::filesystem::path& dir, const GreensModel& model);
GreensModel load_model(const std::filesystem::path& dir);

}  // namespace gfnet
