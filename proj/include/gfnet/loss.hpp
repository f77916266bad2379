#pragma once

#include <vector>

#include <Eigen/Core>

#include "gfnet/network.hpp"
#include "gfnet/pde.hpp"
#include "gfnet/sampling.hpp"

namespace gfnet {

struct LossWeights {
  double lambda_b = 400.0;
  double lambda_s = 1.0;

  void validate() const;
};

/// Unweighted mean-square terms.
struct LossTerms {
  double residual = 0.0;  // mean over interior pairs of (L G - rho)^2
  double boundary = 0.0;  // mean over boundary pairs of G^2
  double symmetry = 0.0;  // mean over interior pairs of (G(x, xi) - G(xi, x))^2

  double total(const LossWeights& w) const { return residual + w.lambda_b * boundary + w.lambda_s * symmetry; }
};

/// Physics-informed loss of one block with the operator coefficients and the
/// mollified source tabulated at every interior pair.
///
/// Evaluation walks the pairs in fixed-size chunks and accumulates in chunk
/// order, so results do not depend on anything but the inputs. Holds scratch
/// space: one instance per thread.
class BlockLoss {
 public:
  BlockLoss(const BlockDataset& dataset, const ScalarField& a, const ScalarField& r, const MollifiedDirac& dirac);

  static constexpr std::size_t kChunk = 128;

  LossTerms terms(const GFNetParams& params);
  /// Terms at `params`; when `grad` is non-null it receives the gradient of
  /// the weighted total with respect to params.theta().
  LossTerms evaluate(const GFNetParams& params, const LossWeights& weights, Eigen::VectorXd* grad);

  std::size_t interior_size() const { return interior_.size(); }
  std::size_t boundary_size() const { return boundary_.size(); }

 private:
  std::vector<SamplePair> interior_, swapped_, boundary_;
  std::vector<double> a_, ax1_, ax2_, r_, rho_;
  Propagation main_, swap_, bdry_;
};

LossTerms loss_terms(const GFNetParams& params, const BlockDataset& dataset, const ScalarField& a,
                     const ScalarField& r, const MollifiedDirac& dirac);

Eigen::VectorXd loss_gradient(const GFNetParams& params, const BlockDataset& dataset, const ScalarField& a,
                              const ScalarField& r, const MollifiedDirac& dirac, const LossWeights& weights);

}  // namespace gfnet
