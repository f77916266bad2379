#include "gfnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gfnet/error.hpp"

namespace gfnet {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::sin: return "sin";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  return "?";
}

std::string_view to_string(ActivationPlacement p) {
  return p == ActivationPlacement::all_hidden ? "all_hidden" : "skip_last_hidden";
}

Activation parse_activation(std::string_view name) {
  if (name == "sin") return Activation::sin;
  if (name == "tanh") return Activation::tanh;
  if (name == "sigmoid") return Activation::sigmoid;
  throw Error(ErrorKind::unknown_name, "unknown activation '" + std::string(name) + "'");
}

ActivationPlacement parse_placement(std::string_view name) {
  if (name == "all_hidden") return ActivationPlacement::all_hidden;
  if (name == "skip_last_hidden") return ActivationPlacement::skip_last_hidden;
  throw Error(ErrorKind::unknown_name, "unknown activation placement '" + std::string(name) + "'");
}

GFNetParams::GFNetParams(int depth, int width, Activation activation, ActivationPlacement placement)
    : depth_(depth), width_(width), activation_(activation), placement_(placement) {
  if (depth < 2) throw Error(ErrorKind::invalid_argument, "network depth must be at least 2");
  if (width < 1) throw Error(ErrorKind::invalid_argument, "network width must be at least 1");
  Eigen::Index offset = 0;
  for (int k = 1; k <= depth; ++k) {
    offsets_.push_back(offset);
    offset += static_cast<Eigen::Index>(in_dim(k)) * out_dim(k) + out_dim(k);
  }
  theta_ = Eigen::VectorXd::Zero(offset);
}

const Eigen::Matrix<double, 6, 4>& GFNetParams::aux_weight() {
  static const Eigen::Matrix<double, 6, 4> w = [] {
    Eigen::Matrix<double, 6, 4> m = Eigen::Matrix<double, 6, 4>::Zero();
    m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = 1.0;
    m(4, 0) = m(5, 1) = 1.0;
    m(4, 2) = m(5, 3) = -1.0;
    return m;
  }();
  return w;
}

bool GFNetParams::activated(int k) const {
  if (k >= depth_) return false;
  if (placement_ == ActivationPlacement::skip_last_hidden && k == depth_ - 1) return false;
  return true;
}

Eigen::Map<const Eigen::MatrixXd> GFNetParams::weight(int k) const {
  return {theta_.data() + weight_offset(k), out_dim(k), in_dim(k)};
}
Eigen::Map<Eigen::MatrixXd> GFNetParams::weight(int k) {
  return {theta_.data() + weight_offset(k), out_dim(k), in_dim(k)};
}
Eigen::Map<const Eigen::VectorXd> GFNetParams::bias(int k) const {
  return {theta_.data() + bias_offset(k), out_dim(k)};
}
Eigen::Map<Eigen::VectorXd> GFNetParams::bias(int k) { return {theta_.data() + bias_offset(k), out_dim(k)}; }

GFNetParams init_params(int depth, int width, Activation activation, std::uint64_t seed,
                        ActivationPlacement placement) {
  GFNetParams p(depth, width, activation, placement);
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  for (int k = 1; k <= depth; ++k) {
    const double limit = std::sqrt(6.0 / (p.in_dim(k) + p.out_dim(k)));
    auto w = p.weight(k);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = (2.0 * uniform() - 1.0) * limit;
  }
  return p;
}

std::array<double, 6> aux_layer(Point2 x, Point2 xi) {
  Eigen::Vector4d v(x.x1, x.x2, xi.x1, xi.x2);
  const Eigen::Matrix<double, 6, 1> out = GFNetParams::aux_weight() * v;
  return {out(0), out(1), out(2), out(3), out(4), out(5)};
}

namespace {

constexpr Eigen::Index kSinBlock = 512;

// sin and cos of a block of moderate arguments: Cody-Waite reduction by pi/2
// and the Cephes minimax polynomials on [-pi/4, pi/4], written as array
// arithmetic so that it vectorizes.
void sincos_block(const Eigen::Map<const Eigen::ArrayXd>& x, Eigen::Map<Eigen::ArrayXd>& s_out,
                  Eigen::Map<Eigen::ArrayXd>& c_out) {
  if (x.abs().maxCoeff() > 1e5) {
    for (Eigen::Index i = 0; i < x.size(); ++i) ::sincos(x[i], &s_out[i], &c_out[i]);
    return;
  }
  constexpr double pio2_1 = 1.57079632673412561417e+00, pio2_2 = 6.07710050630396597660e-11,
                   pio2_3 = 2.02226624871116645580e-21;
  const Eigen::ArrayXd j = (x * (2.0 / std::numbers::pi)).round();
  const Eigen::ArrayXd r = ((x - j * pio2_1) - j * pio2_2) - j * pio2_3;
  const Eigen::ArrayXd z = r * r;
  const Eigen::ArrayXd sp =
      r + r * z *
              ((((((1.58962301576546568060e-10 * z - 2.50507477628578072866e-8) * z + 2.75573136213857245213e-6) * z -
                  1.98412698295895385996e-4) *
                     z +
                 8.33333333332211858878e-3) *
                    z) -
               1.66666666666666307295e-1);
  const Eigen::ArrayXd cp =
      1.0 - 0.5 * z +
      z * z *
          (((((-1.13585365213876817300e-11 * z + 2.08757008419747316778e-9) * z - 2.75573141792967388112e-7) * z +
             2.48015872888517045348e-5) *
                z -
            1.38888888888730564116e-3) *
               z +
           4.16666666666665929218e-2);
  const Eigen::ArrayXd q = j - 4.0 * (0.25 * j).floor();  // quadrant in {0, 1, 2, 3}
  const Eigen::ArrayXd odd = q - 2.0 * (0.5 * q).floor();
  const Eigen::ArrayXd sin_sign = 1.0 - 2.0 * (0.5 * q).floor();
  const Eigen::ArrayXd a = (0.5 * (q + 1.0)).floor();
  const Eigen::ArrayXd cos_sign = 1.0 - 2.0 * (a - 2.0 * (0.5 * a).floor());
  s_out = sin_sign * (odd * cp + (1.0 - odd) * sp);
  c_out = cos_sign * (odd * sp + (1.0 - odd) * cp);
}

// Activation and its first three derivatives, elementwise.
void activate(Activation act, const Eigen::ArrayXXd& z, Eigen::ArrayXXd& f, Eigen::ArrayXXd& d1,
              Eigen::ArrayXXd& d2, Eigen::ArrayXXd& d3) {
  f.resize(z.rows(), z.cols());
  d1.resizeLike(f);
  d2.resizeLike(f);
  d3.resizeLike(f);
  const Eigen::Index size = z.size();
  const double* zp = z.data();
  double *fp = f.data(), *p1 = d1.data(), *p2 = d2.data(), *p3 = d3.data();
  switch (act) {
    case Activation::sin:
      for (Eigen::Index i = 0; i < size; i += kSinBlock) {
        const Eigen::Index len = std::min(kSinBlock, size - i);
        Eigen::Map<Eigen::ArrayXd> sv(fp + i, len), cv(p1 + i, len);
        sincos_block(Eigen::Map<const Eigen::ArrayXd>(zp + i, len), sv, cv);
        Eigen::Map<Eigen::ArrayXd>(p2 + i, len) = -sv;
        Eigen::Map<Eigen::ArrayXd>(p3 + i, len) = -cv;
      }
      break;
    case Activation::tanh:
      for (Eigen::Index i = 0; i < size; ++i) {
        const double t = std::tanh(zp[i]);
        const double g = 1.0 - t * t;
        fp[i] = t;
        p1[i] = g;
        p2[i] = -2.0 * t * g;
        p3[i] = (6.0 * t * t - 2.0) * g;
      }
      break;
    case Activation::sigmoid:
      for (Eigen::Index i = 0; i < size; ++i) {
        const double s = 1.0 / (1.0 + std::exp(-zp[i]));
        const double g = s * (1.0 - s);
        const double u = 1.0 - 2.0 * s;
        fp[i] = s;
        p1[i] = g;
        p2[i] = g * u;
        p3[i] = g * u * u - 2.0 * g * g;
      }
      break;
  }
}

}  // namespace

void Propagation::forward(const GFNetParams& params, std::span<const SamplePair> pairs, Channels channels) {
  n_ = static_cast<int>(pairs.size());
  switch (channels) {
    case Channels::value: dirs_ = 0; seconds_ = 0; break;
    case Channels::x_derivs: dirs_ = 2; seconds_ = 2; break;
    case Channels::full: dirs_ = 4; seconds_ = 2; break;
  }
  const int depth = params.depth();
  const int cn = channel_count() * n_;
  inputs_.resize(static_cast<std::size_t>(depth));
  pre_.resize(static_cast<std::size_t>(depth));
  d1_.resize(static_cast<std::size_t>(depth));
  d2_.resize(static_cast<std::size_t>(depth));
  d3_.resize(static_cast<std::size_t>(depth));

  // Input directions are x1, x2, xi1, xi2: the columns of the auxiliary weight.
  const auto& aux = GFNetParams::aux_weight();
  Eigen::MatrixXd& h0 = inputs_[0];
  h0.setZero(6, cn);
  for (int i = 0; i < n_; ++i) {
    const auto& p = pairs[static_cast<std::size_t>(i)];
    h0.col(i) = aux * Eigen::Vector4d(p.x.x1, p.x.x2, p.xi.x1, p.xi.x2);
  }
  for (int d = 0; d < dirs_; ++d)
    h0.middleCols((1 + d) * n_, n_).colwise() = aux.col(d);

  Eigen::ArrayXXd f;
  for (int k = 1; k <= depth; ++k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    Eigen::MatrixXd& z = pre_[idx];
    z.noalias() = params.weight(k) * inputs_[idx];
    z.leftCols(n_).colwise() += params.bias(k);
    if (k == depth) {
      out_ = z.row(0);
      break;
    }
    Eigen::MatrixXd& h = inputs_[idx + 1];
    if (!params.activated(k)) {
      h = z;
      continue;
    }
    activate(params.activation(), z.leftCols(n_).array(), f, d1_[idx], d2_[idx], d3_[idx]);
    h.resize(z.rows(), cn);
    h.leftCols(n_) = f.matrix();
    const auto& g1 = d1_[idx];
    const auto& g2 = d2_[idx];
    for (int d = 0; d < dirs_; ++d)
      h.middleCols((1 + d) * n_, n_).array() = g1 * z.middleCols((1 + d) * n_, n_).array();
    for (int d = 0; d < seconds_; ++d) {
      const auto zd = z.middleCols((1 + d) * n_, n_).array();
      const auto zs = z.middleCols((1 + dirs_ + d) * n_, n_).array();
      h.middleCols((1 + dirs_ + d) * n_, n_).array() = g2 * zd * zd + g1 * zs;
    }
  }
}

void Propagation::backward(const GFNetParams& params, const Eigen::RowVectorXd& seed,
                           Eigen::Ref<Eigen::VectorXd> grad) {
  const int depth = params.depth();
  const int cn = channel_count() * n_;
  zbar_ = seed;
  for (int k = depth; k >= 1; --k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    Eigen::Map<Eigen::MatrixXd> gw(grad.data() + params.weight_offset(k), params.out_dim(k), params.in_dim(k));
    Eigen::Map<Eigen::VectorXd> gb(grad.data() + params.bias_offset(k), params.out_dim(k));
    gw.noalias() += zbar_ * inputs_[idx].transpose();
    gb += zbar_.leftCols(n_).rowwise().sum();
    if (k == 1) break;

    hbar_.noalias() = params.weight(k).transpose() * zbar_;
    const int j = k - 1;  // layer whose output is hbar_
    if (!params.activated(j)) {
      zbar_.swap(hbar_);
      continue;
    }
    const auto jdx = static_cast<std::size_t>(j - 1);
    const auto& g1 = d1_[jdx];
    const auto& g2 = d2_[jdx];
    const auto& g3 = d3_[jdx];
    const Eigen::MatrixXd& z = pre_[jdx];
    zbar_.resize(hbar_.rows(), cn);
    auto zv = zbar_.leftCols(n_).array();
    zv = hbar_.leftCols(n_).array() * g1;
    for (int d = 0; d < dirs_; ++d) {
      const auto zd = z.middleCols((1 + d) * n_, n_).array();
      const auto hd = hbar_.middleCols((1 + d) * n_, n_).array();
      zv += hd * g2 * zd;
      zbar_.middleCols((1 + d) * n_, n_).array() = hd * g1;
    }
    for (int d = 0; d < seconds_; ++d) {
      const auto zd = z.middleCols((1 + d) * n_, n_).array();
      const auto zs = z.middleCols((1 + dirs_ + d) * n_, n_).array();
      const auto hs = hbar_.middleCols((1 + dirs_ + d) * n_, n_).array();
      zv += hs * (g3 * zd * zd + g2 * zs);
      zbar_.middleCols((1 + d) * n_, n_).array() += 2.0 * hs * g2 * zd;
      zbar_.middleCols((1 + dirs_ + d) * n_, n_).array() = hs * g1;
    }
  }
}

EvalBundle forward_derivs(const GFNetParams& params, Point2 x, Point2 xi) {
  const SamplePair pair{x, xi};
  Propagation prop;
  prop.forward(params, std::span(&pair, 1), Channels::full);
  EvalBundle b;
  b.value = prop.output(0, 0);
  b.grad_x = {prop.output(1, 0), prop.output(2, 0)};
  b.grad_xi = {prop.output(3, 0), prop.output(4, 0)};
  b.hess_x_diag = {prop.output(5, 0), prop.output(6, 0)};
  return b;
}

double forward(const GFNetParams& params, Point2 x, Point2 xi) {
  // Routed through the derivative path so both agree bit for bit.
  return forward_derivs(params, x, xi).value;
}

std::vector<EvalBundle> batch_eval(const GFNetParams& params, std::span<const SamplePair> pairs) {
  std::vector<EvalBundle> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(forward_derivs(params, p.x, p.xi));
  return out;
}

std::vector<double> batch_values(const GFNetParams& params, std::span<const SamplePair> pairs) {
  constexpr std::size_t kChunk = 256;
  std::vector<double> out(pairs.size());
  Propagation prop;
  for (std::size_t start = 0; start < pairs.size(); start += kChunk) {
    const std::size_t len = std::min(kChunk, pairs.size() - start);
    prop.forward(params, pairs.subspan(start, len), Channels::value);
    for (std::size_t i = 0; i < len; ++i) out[start + i] = prop.output(0, static_cast<int>(i));
  }
  return out;
}

}  // namespace gfnet
