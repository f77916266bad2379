#include "gfnet/loss.hpp"

#include <algorithm>
#include <span>

#include "gfnet/error.hpp"

namespace gfnet {

void LossWeights::validate() const {
  if (!(lambda_b >= 0.0) || !(lambda_s >= 0.0))
    throw Error(ErrorKind::invalid_argument, "loss weights must be non-negative");
}

BlockLoss::BlockLoss(const BlockDataset& dataset, const ScalarField& a, const ScalarField& r,
                     const MollifiedDirac& dirac)
    : interior_(dataset.interior_pairs), boundary_(dataset.boundary_pairs) {
  if (interior_.empty()) throw Error(ErrorKind::empty_partition, "block has no interior pairs");
  if (boundary_.empty()) throw Error(ErrorKind::empty_partition, "block has no boundary pairs");
  for (const auto& p : interior_) {
    swapped_.push_back({p.xi, p.x});
    a_.push_back(a.value(p.x));
    const Point2 ga = a.gradient(p.x);
    ax1_.push_back(ga.x1);
    ax2_.push_back(ga.x2);
    r_.push_back(r.value(p.x));
    rho_.push_back(dirac(p.x, p.xi));
  }
}

LossTerms BlockLoss::terms(const GFNetParams& params) { return evaluate(params, {}, nullptr); }

LossTerms BlockLoss::evaluate(const GFNetParams& params, const LossWeights& weights, Eigen::VectorXd* grad) {
  if (grad) grad->setZero(params.parameter_count());
  const double nc = static_cast<double>(interior_.size());
  const double nb = static_cast<double>(boundary_.size());
  double sum_res = 0.0, sum_sym = 0.0, sum_bdry = 0.0;
  const double c_res = 2.0 / nc;
  const double c_sym = 2.0 * weights.lambda_s / nc;
  Eigen::RowVectorXd seed, seed_swap;

  const std::span<const SamplePair> interior(interior_), swapped(swapped_), boundary(boundary_);
  for (std::size_t start = 0; start < interior.size(); start += kChunk) {
    const std::size_t len = std::min(kChunk, interior.size() - start);
    const int n = static_cast<int>(len);
    main_.forward(params, interior.subspan(start, len), Channels::x_derivs);
    swap_.forward(params, swapped.subspan(start, len), Channels::value);
    if (grad) {
      seed.setZero(5 * n);
      seed_swap.setZero(n);
    }
    for (int i = 0; i < n; ++i) {
      const std::size_t j = start + static_cast<std::size_t>(i);
      const DerivBundle u{main_.output(0, i), {main_.output(1, i), main_.output(2, i)},
                          {main_.output(3, i), main_.output(4, i)}};
      const double e = apply_operator(a_[j], {ax1_[j], ax2_[j]}, r_[j], u) - rho_[j];
      const double d = u.value - swap_.output(0, i);
      sum_res += e * e;
      sum_sym += d * d;
      if (grad) {
        seed(i) = c_res * e * r_[j] + c_sym * d;
        seed(n + i) = -c_res * e * ax1_[j];
        seed(2 * n + i) = -c_res * e * ax2_[j];
        seed(3 * n + i) = -c_res * e * a_[j];
        seed(4 * n + i) = -c_res * e * a_[j];
        seed_swap(i) = -c_sym * d;
      }
    }
    if (grad) {
      main_.backward(params, seed, *grad);
      swap_.backward(params, seed_swap, *grad);
    }
  }

  const double c_bdry = 2.0 * weights.lambda_b / nb;
  for (std::size_t start = 0; start < boundary.size(); start += kChunk) {
    const std::size_t len = std::min(kChunk, boundary.size() - start);
    const int n = static_cast<int>(len);
    bdry_.forward(params, boundary.subspan(start, len), Channels::value);
    if (grad) seed.setZero(n);
    for (int i = 0; i < n; ++i) {
      const double g = bdry_.output(0, i);
      sum_bdry += g * g;
      if (grad) seed(i) = c_bdry * g;
    }
    if (grad) bdry_.backward(params, seed, *grad);
  }
  return {sum_res / nc, sum_bdry / nb, sum_sym / nc};
}

LossTerms loss_terms(const GFNetParams& params, const BlockDataset& dataset, const ScalarField& a,
                     const ScalarField& r, const MollifiedDirac& dirac) {
  BlockLoss loss(dataset, a, r, dirac);
  return loss.terms(params);
}

Eigen::VectorXd loss_gradient(const GFNetParams& params, const BlockDataset& dataset, const ScalarField& a,
                              const ScalarField& r, const MollifiedDirac& dirac, const LossWeights& weights) {
  BlockLoss loss(dataset, a, r, dirac);
  Eigen::VectorXd grad;
  loss.evaluate(params, weights, &grad);
  return grad;
}

}  // namespace gfnet
