#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gfnet/loss.hpp"
#include "gfnet/model.hpp"
#include "gfnet/network.hpp"
#include "gfnet/optim.hpp"
#include "gfnet/pde.hpp"
#include "gfnet/sampling.hpp"

namespace gfnet {

struct TrainConfig {
  int adam_max_steps = 20000;
  double adam_lr = 1e-3;
  double eps1 = 0.5;
  int lbfgs_max_steps = 10000;
  double eps2 = 1e-4;
  int lbfgs_memory = 20;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  std::uint64_t seed = 0;
  int history_every = 100;  // loss history stride, in optimizer steps

  /// Throws Error(invalid_argument) unless eps1 > eps2 > 0 and 0 < c1 < c2 < 1.
  void validate() const;
};

struct NetworkSpec {
  int depth = 7;
  int width = 50;
  Activation activation = Activation::sin;
  ActivationPlacement placement = ActivationPlacement::all_hidden;
};

struct HistoryEntry {
  std::string stage;  // adam | lbfgs
  int step = 0;
  double loss = 0.0;
};

struct TrainReport {
  int block_index = 0;
  int steps_adam = 0;
  int steps_lbfgs = 0;
  int evaluations_lbfgs = 0;  // loss evaluations inside L-BFGS, line searches included
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double residual = 0.0;           // unweighted
  double boundary_weighted = 0.0;  // lambda_b * L_bdry
  double symmetry_weighted = 0.0;  // lambda_s * L_sym
  StopReason stop = StopReason::max_steps;
  double wall_seconds = 0.0;
  std::vector<HistoryEntry> history;
  bool failed = false;
  std::string error;
};

struct TrainedBlock {
  GFNetParams params;
  TrainReport report;
};

/// Adam from `init` until the loss is at most eps1 (or adam_max_steps), then
/// L-BFGS from the best Adam iterate until eps2 (or lbfgs_max_steps).
TrainedBlock train_block(const BlockDataset& dataset, const ScalarField& a, const ScalarField& r, double s,
                         const TrainConfig& cfg, const LossWeights& weights, const GFNetParams& init);

/// Per-block initialisation seed.
std::uint64_t block_seed(std::uint64_t seed, int block_index);

struct TrainAllResult {
  GreensModel model;
  std::vector<TrainReport> reports;  // in dataset order
};

/// Trains every block independently on up to `workers` threads. The result
/// does not depend on `workers`. Failed blocks are reported and left out of
/// the model, which is then marked partial.
TrainAllResult train_all(std::span<const BlockDataset> blocks, const ProblemSpec& problem,
                         const BlockPartition& partition, double s, const NetworkSpec& net, const TrainConfig& cfg,
                         const LossWeights& weights, int workers);

/// Warm-starts every block of `model` on datasets built for the sharper
/// mollifier `new_s` (at most the model's s) and records the step in the lineage.
TrainAllResult fine_tune(const GreensModel& model, std::span<const BlockDataset> blocks, const ProblemSpec& problem,
                         double new_s, const TrainConfig& cfg, const LossWeights& weights, int workers);

/// One `key=value` record per line.
void write_report(std::ostream& out, const TrainReport& report);

}  // namespace gfnet
