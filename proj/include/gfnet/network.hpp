#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "gfnet/geometry.hpp"
#include "gfnet/sampling.hpp"

namespace gfnet {

enum class Activation { sin, tanh, sigmoid };

/// Where the nonlinearity is applied. `all_hidden` activates layers 1..D-1
/// and leaves only the output layer linear. `skip_last_hidden` additionally
/// leaves layer D-1 linear.
enum class ActivationPlacement { all_hidden, skip_last_hidden };

std::string_view to_string(Activation a);
std::string_view to_string(ActivationPlacement p);
Activation parse_activation(std::string_view name);
ActivationPlacement parse_placement(std::string_view name);

/// Auxiliary layer followed by D affine layers.
///
/// The auxiliary weight maps (x, xi) to (x, xi, x - xi) and is frozen: it is
/// not part of `theta()`, the flat vector of trainable parameters. Layer k
/// (1-based) stores its weight column-major followed by its bias.
class GFNetParams {
 public:
  GFNetParams() = default;
  GFNetParams(int depth, int width, Activation activation,
              ActivationPlacement placement = ActivationPlacement::all_hidden);

  int depth() const { return depth_; }
  int width() const { return width_; }
  Activation activation() const { return activation_; }
  ActivationPlacement placement() const { return placement_; }

  static const Eigen::Matrix<double, 6, 4>& aux_weight();

  int in_dim(int k) const { return k == 1 ? 6 : width_; }
  int out_dim(int k) const { return k == depth_ ? 1 : width_; }
  bool activated(int k) const;

  Eigen::Map<const Eigen::MatrixXd> weight(int k) const;
  Eigen::Map<Eigen::MatrixXd> weight(int k);
  Eigen::Map<const Eigen::VectorXd> bias(int k) const;
  Eigen::Map<Eigen::VectorXd> bias(int k);

  Eigen::Index weight_offset(int k) const { return offsets_[static_cast<std::size_t>(k - 1)]; }
  Eigen::Index bias_offset(int k) const { return weight_offset(k) + in_dim(k) * out_dim(k); }

  const Eigen::VectorXd& theta() const { return theta_; }
  Eigen::VectorXd& theta() { return theta_; }
  Eigen::Index parameter_count() const { return theta_.size(); }

  friend bool operator==(const GFNetParams& a, const GFNetParams& b) {
    return a.depth_ == b.depth_ && a.width_ == b.width_ && a.activation_ == b.activation_ &&
           a.placement_ == b.placement_ && a.theta_.size() == b.theta_.size() && a.theta_ == b.theta_;
  }

 private:
  int depth_ = 0;
  int width_ = 0;
  Activation activation_ = Activation::sin;
  ActivationPlacement placement_ = ActivationPlacement::all_hidden;
  std::vector<Eigen::Index> offsets_;
  Eigen::VectorXd theta_;
};

struct EvalBundle {
  double value = 0.0;
  Point2 grad_x;       // dG/dx1, dG/dx2
  Point2 grad_xi;      // dG/dxi1, dG/dxi2
  Point2 hess_x_diag;  // d2G/dx1^2, d2G/dx2^2
};

/// Glorot-uniform weights from a seeded 64-bit Mersenne twister, zero biases.
GFNetParams init_params(int depth, int width, Activation activation, std::uint64_t seed,
                        ActivationPlacement placement = ActivationPlacement::all_hidden);

std::array<double, 6> aux_layer(Point2 x, Point2 xi);

double forward(const GFNetParams& params, Point2 x, Point2 xi);
EvalBundle forward_derivs(const GFNetParams& params, Point2 x, Point2 xi);
std::vector<EvalBundle> batch_eval(const GFNetParams& params, std::span<const SamplePair> pairs);
/// Values only, for many pairs.
std::vector<double> batch_values(const GFNetParams& params, std::span<const SamplePair> pairs);

/// Which derivative channels a batched propagation carries.
///
/// value:    G
/// x_derivs: G, dG/dx1, dG/dx2, d2G/dx1^2, d2G/dx2^2
/// full:     G, dG/dx1, dG/dx2, dG/dxi1, dG/dxi2, d2G/dx1^2, d2G/dx2^2
enum class Channels { value, x_derivs, full };

/// Batched forward propagation of the value and its input derivatives through
/// every layer, with a reverse sweep giving parameter gradients of any linear
/// functional of the output channels.
///
/// Channel c of point i lives in column c * n + i of every layer matrix.
class Propagation {
 public:
  void forward(const GFNetParams& params, std::span<const SamplePair> pairs, Channels channels);

  int points() const { return n_; }
  int channel_count() const { return 1 + dirs_ + seconds_; }
  /// Output row: channel c of point i at index c * points() + i.
  const Eigen::RowVectorXd& output() const { return out_; }
  double output(int channel, int i) const { return out_(channel * n_ + i); }

  /// Accumulates into `grad` (sized like params.theta()) the gradient of
  /// sum_j seed(j) * output(j).
  void backward(const GFNetParams& params, const Eigen::RowVectorXd& seed, Eigen::Ref<Eigen::VectorXd> grad);

 private:
  int n_ = 0;
  int dirs_ = 0;
  int seconds_ = 0;
  std::vector<Eigen::MatrixXd> inputs_;  // inputs_[k-1]: input of layer k
  std::vector<Eigen::MatrixXd> pre_;     // pre_[k-1]: pre-activation of layer k
  std::vector<Eigen::ArrayXXd> d1_, d2_, d3_;
  Eigen::RowVectorXd out_;
  Eigen::MatrixXd zbar_, hbar_;
};

}  // namespace gfnet
