#include "gfnet/training.hpp"

#include <chrono>
#include <cmath>
#include <mutex>
#include <ostream>
#include <sstream>

#include "gfnet/error.hpp"
#include "gfnet/parallel.hpp"
#include "gfnet/text_io.hpp"

#ifdef __GLIBC__
#include <malloc.h>
#endif

namespace gfnet {

void TrainConfig::validate() const {
  if (!(eps2 > 0.0) || !(eps1 > eps2)) throw Error(ErrorKind::invalid_argument, "need eps1 > eps2 > 0");
  if (!(wolfe_c1 > 0.0) || !(wolfe_c1 < wolfe_c2) || !(wolfe_c2 < 1.0))
    throw Error(ErrorKind::invalid_argument, "need 0 < wolfe_c1 < wolfe_c2 < 1");
  if (adam_max_steps < 0 || lbfgs_max_steps < 0) throw Error(ErrorKind::invalid_argument, "step limits must be >= 0");
  if (lbfgs_memory < 1) throw Error(ErrorKind::invalid_argument, "lbfgs_memory must be >= 1");
  if (!(adam_lr > 0.0)) throw Error(ErrorKind::invalid_argument, "adam_lr must be positive");
}

namespace {

// Raises the glibc mmap and trim thresholds so loss buffers are recycled from the heap.
void keep_buffers_on_heap() {
#ifdef __GLIBC__
  static std::once_flag once;
  std::call_once(once, [] {
    mallopt(M_MMAP_THRESHOLD, 1 << 30);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
  });
#endif
}

}  // namespace

TrainedBlock train_block(const BlockDataset& dataset, const ScalarField& a, const ScalarField& r, double s,
                         const TrainConfig& cfg, const LossWeights& weights, const GFNetParams& init) {
  keep_buffers_on_heap();
  cfg.validate();
  weights.validate();
  const auto t0 = std::chrono::steady_clock::now();
  BlockLoss loss(dataset, a, r, MollifiedDirac(s));
  TrainedBlock out;
  TrainReport& rep = out.report;
  rep.block_index = dataset.block_index;
  const int stride = std::max(1, cfg.history_every);

  GFNetParams p = init;
  Eigen::VectorXd grad;
  double f = loss.evaluate(p, weights, &grad).total(weights);
  rep.initial_loss = f;
  Eigen::VectorXd best = p.theta();
  double best_f = f;
  rep.history.push_back({"adam", 0, f});

  AdamConfig adam;
  adam.lr = cfg.adam_lr;
  AdamState state(p.parameter_count());
  while (best_f > cfg.eps1 && rep.steps_adam < cfg.adam_max_steps) {
    adam_step(state, p.theta(), grad, adam);
    ++rep.steps_adam;
    f = loss.evaluate(p, weights, &grad).total(weights);
    if (!std::isfinite(f)) break;
    if (f < best_f) {
      best_f = f;
      best = p.theta();
    }
    if (rep.steps_adam % stride == 0) rep.history.push_back({"adam", rep.steps_adam, best_f});
  }

  LbfgsOptions lo;
  lo.memory = cfg.lbfgs_memory;
  lo.max_steps = cfg.lbfgs_max_steps;
  lo.tol = cfg.eps2;
  lo.c1 = cfg.wolfe_c1;
  lo.c2 = cfg.wolfe_c2;
  auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    p.theta() = x;
    return loss.evaluate(p, weights, &g).total(weights);
  };
  const LbfgsResult res = lbfgs_minimize(objective, best, lo, [&](int step, double fv) {
    if (step % stride == 0) rep.history.push_back({"lbfgs", step, fv});
  });
  rep.steps_lbfgs = res.steps;
  rep.evaluations_lbfgs = res.evaluations;
  rep.stop = res.stop;

  p.theta() = res.x;
  const LossTerms t = loss.terms(p);
  rep.residual = t.residual;
  rep.boundary_weighted = weights.lambda_b * t.boundary;
  rep.symmetry_weighted = weights.lambda_s * t.symmetry;
  rep.final_loss = t.total(weights);
  rep.history.push_back({"lbfgs", rep.steps_lbfgs, rep.final_loss});
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.params = std::move(p);
  return out;
}

std::uint64_t block_seed(std::uint64_t seed, int block_index) {
  // splitmix64 of the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(block_index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

TrainAllResult run_blocks(std::span<const BlockDataset> blocks, const ProblemSpec& problem, double s,
                          const TrainConfig& cfg, const LossWeights& weights, int workers,
                          const std::function<GFNetParams(const BlockDataset&)>& init_for) {
  if (blocks.empty()) throw Error(ErrorKind::empty_partition, "no blocks to train");
  cfg.validate();
  weights.validate();
  std::vector<TrainedBlock> results(blocks.size());
  parallel_for(blocks.size(), workers, [&](std::size_t i) {
    try {
      results[i] = train_block(blocks[i], problem.a, problem.r, s, cfg, weights, init_for(blocks[i]));
    } catch (const std::exception& e) {
      results[i].report.block_index = blocks[i].block_index;
      results[i].report.failed = true;
      results[i].report.error = e.what();
    }
  });
  TrainAllResult out;
  out.model.domain = problem.domain;
  out.model.s = s;
  for (auto& r : results) {
    if (r.report.failed)
      out.model.partial = true;
    else
      out.model.blocks.emplace(r.report.block_index, std::move(r.params));
    out.reports.push_back(std::move(r.report));
  }
  return out;
}

}  // namespace

TrainAllResult train_all(std::span<const BlockDataset> blocks, const ProblemSpec& problem,
                         const BlockPartition& partition, double s, const NetworkSpec& net, const TrainConfig& cfg,
                         const LossWeights& weights, int workers) {
  TrainAllResult out = run_blocks(blocks, problem, s, cfg, weights, workers, [&](const BlockDataset& d) {
    return init_params(net.depth, net.width, net.activation, block_seed(cfg.seed, d.block_index), net.placement);
  });
  out.model.partition = partition;
  std::ostringstream line;
  line << "train problem=" << problem.name << " s=" << format_double(s) << " seed=" << cfg.seed
       << " depth=" << net.depth << " width=" << net.width << " activation=" << to_string(net.activation)
       << " placement=" << to_string(net.placement) << " lambda_b=" << format_double(weights.lambda_b)
       << " lambda_s=" << format_double(weights.lambda_s);
  out.model.lineage.push_back(line.str());
  return out;
}

TrainAllResult fine_tune(const GreensModel& model, std::span<const BlockDataset> blocks, const ProblemSpec& problem,
                         double new_s, const TrainConfig& cfg, const LossWeights& weights, int workers) {
  if (!(new_s > 0.0) || new_s > model.s)
    throw Error(ErrorKind::invalid_argument, "fine-tuning needs 0 < new_s <= " + format_double(model.s));
  if (!(problem.domain == model.domain)) throw Error(ErrorKind::domain_mismatch, "problem and model domains differ");
  TrainAllResult out = run_blocks(blocks, problem, new_s, cfg, weights, workers, [&](const BlockDataset& d) {
    auto it = model.blocks.find(d.block_index);
    if (it == model.blocks.end())
      throw Error(ErrorKind::unoccupied_block, "model has no network for block " + std::to_string(d.block_index));
    return it->second;
  });
  out.model.partition = model.partition;
  out.model.partial = out.model.partial || model.partial;
  out.model.lineage = model.lineage;
  out.model.lineage.push_back("fine_tune s=" + format_double(model.s) + "->" + format_double(new_s) +
                              " lambda_b=" + format_double(weights.lambda_b) +
                              " lambda_s=" + format_double(weights.lambda_s));
  return out;
}

void write_report(std::ostream& out, const TrainReport& r) {
  out << "block=" << r.block_index;
  if (r.failed) {
    out << " failed=1 error=\"" << r.error << "\"\n";
    return;
  }
  out << " steps_adam=" << r.steps_adam << " steps_lbfgs=" << r.steps_lbfgs
      << " evaluations_lbfgs=" << r.evaluations_lbfgs
      << " initial_loss=" << format_double(r.initial_loss) << " final_loss=" << format_double(r.final_loss)
      << " residual=" << format_double(r.residual) << " boundary=" << format_double(r.boundary_weighted)
      << " symmetry=" << format_double(r.symmetry_weighted) << " stop=" << to_string(r.stop)
      << " wall_seconds=" << format_double(r.wall_seconds) << '\n';
}

}  // namespace gfnet
