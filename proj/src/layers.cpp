#include "armpose/layers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace armpose {

std::string shape_string(const Shape& s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "x" : "") << s[i];
  os << ']';
  return os.str();
}

const char* to_string(Activation a) noexcept {
  switch (a) {
    case Activation::Linear: return "linear";
    case Activation::Tanh: return "tanh";
    case Activation::Relu: return "relu";
  }
  return "unknown";
}

Activation activation_from_string(std::string_view s) {
  if (s == "linear") return Activation::Linear;
  if (s == "tanh") return Activation::Tanh;
  if (s == "relu") return Activation::Relu;
  throw Error(ErrorKind::InvalidConfig, "unknown activation '" + std::string(s) + "'");
}

namespace {

template <typename T>
using MatR = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapR = Eigen::Map<MatR<T>>;
template <typename T>
using CMapR = Eigen::Map<const MatR<T>>;

[[noreturn]] void shape_error(const std::string& what) { throw Error(ErrorKind::ShapeMismatch, what); }

void require_rank(const Shape& s, std::size_t rank, const char* who) {
  if (s.size() != rank)
    shape_error(std::string(who) + ": expected rank " + std::to_string(rank) + ", got " + shape_string(s));
}

// Rows of the patch matrix are output pixels; columns follow (ky, kx, c),
// the same order as the flattened [K, K, C] weight slice.
template <typename T>
void im2col(const T* img, std::size_t h, std::size_t w, std::size_t c, std::size_t k, T* patches) {
  const std::size_t oh = h - k + 1, ow = w - k + 1;
  const std::size_t row_len = k * c;
  for (std::size_t y = 0; y < oh; ++y)
    for (std::size_t x = 0; x < ow; ++x) {
      T* dst = patches + (y * ow + x) * k * row_len;
      for (std::size_t ky = 0; ky < k; ++ky) {
        const T* src = img + ((y + ky) * w + x) * c;
        std::copy(src, src + row_len, dst + ky * row_len);
      }
    }
}

template <typename T>
void col2im_add(const T* patches, std::size_t h, std::size_t w, std::size_t c, std::size_t k, T* img) {
  const std::size_t oh = h - k + 1, ow = w - k + 1;
  const std::size_t row_len = k * c;
  for (std::size_t y = 0; y < oh; ++y)
    for (std::size_t x = 0; x < ow; ++x) {
      const T* src = patches + (y * ow + x) * k * row_len;
      for (std::size_t ky = 0; ky < k; ++ky) {
        T* dst = img + ((y + ky) * w + x) * c;
        const T* s = src + ky * row_len;
        for (std::size_t i = 0; i < row_len; ++i) dst[i] += s[i];
      }
    }
}

}  // namespace

template <typename T>
void apply_activation(Tensor<T>& t, Activation act) {
  switch (act) {
    case Activation::Linear: return;
    case Activation::Tanh:
      for (auto& v : t.values()) v = std::tanh(v);
      return;
    case Activation::Relu:
      for (auto& v : t.values()) v = v > T{0} ? v : T{0};
      return;
  }
}

template <typename T>
void activation_backward(const Tensor<T>& output, Tensor<T>& grad, Activation act) {
  if (output.size() != grad.size()) shape_error("activation_backward: size mismatch");
  switch (act) {
    case Activation::Linear: return;
    case Activation::Tanh:
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] *= T{1} - output[i] * output[i];
      return;
    case Activation::Relu:
      for (std::size_t i = 0; i < grad.size(); ++i)
        if (!(output[i] > T{0})) grad[i] = T{0};
      return;
  }
}

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& weights, const Tensor<T>& bias) {
  require_rank(input.shape(), 4, "conv2d input");
  require_rank(weights.shape(), 4, "conv2d weights");
  const std::size_t b = input.dim(0), h = input.dim(1), w = input.dim(2), c = input.dim(3);
  const std::size_t k = weights.dim(0), f = weights.dim(3);
  if (weights.dim(1) != k || weights.dim(2) != c)
    shape_error("conv2d: weights " + shape_string(weights.shape()) + " do not fit input " +
                shape_string(input.shape()));
  if (bias.size() != f) shape_error("conv2d: bias size must equal filter count");
  if (k == 0 || k > h || k > w) shape_error("conv2d: kernel does not fit the input");
  const std::size_t oh = h - k + 1, ow = w - k + 1, kk = k * k * c;

  Tensor<T> out({b, oh, ow, f});
  std::vector<T> patches(oh * ow * kk);
  const CMapR<T> wmat(weights.data(), kk, f);
  const Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>> brow(bias.data(), f);
  for (std::size_t n = 0; n < b; ++n) {
    im2col(input.data() + n * h * w * c, h, w, c, k, patches.data());
    const CMapR<T> pmat(patches.data(), oh * ow, kk);
    MapR<T> omat(out.data() + n * oh * ow * f, oh * ow, f);
    omat.noalias() = pmat * wmat;
    omat.rowwise() += brow;
  }
  return out;
}

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& input, const Tensor<T>& weights,
                             const Tensor<T>& grad_out, bool need_input_grad) {
  require_rank(input.shape(), 4, "conv2d input");
  const std::size_t b = input.dim(0), h = input.dim(1), w = input.dim(2), c = input.dim(3);
  const std::size_t k = weights.dim(0), f = weights.dim(3);
  const std::size_t oh = h - k + 1, ow = w - k + 1, kk = k * k * c;
  if (grad_out.shape() != Shape{b, oh, ow, f}) shape_error("conv2d_backward: grad_out shape mismatch");

  ConvGrads<T> g;
  g.weights = Tensor<T>(weights.shape());
  g.bias = Tensor<T>({f});
  if (need_input_grad) g.input = Tensor<T>(input.shape());

  std::vector<T> patches(oh * ow * kk);
  std::vector<T> dpatches(need_input_grad ? oh * ow * kk : 0);
  MapR<T> dw(g.weights.data(), kk, f);
  Eigen::Map<Eigen::Matrix<T, 1, Eigen::Dynamic>> db(g.bias.data(), f);
  const CMapR<T> wmat(weights.data(), kk, f);
  for (std::size_t n = 0; n < b; ++n) {
    im2col(input.data() + n * h * w * c, h, w, c, k, patches.data());
    const CMapR<T> pmat(patches.data(), oh * ow, kk);
    const CMapR<T> gmat(grad_out.data() + n * oh * ow * f, oh * ow, f);
    dw.noalias() += pmat.transpose() * gmat;
    db += gmat.colwise().sum();
    if (need_input_grad) {
      MapR<T> dp(dpatches.data(), oh * ow, kk);
      dp.noalias() = gmat * wmat.transpose();
      col2im_add(dpatches.data(), h, w, c, k, g.input.data() + n * h * w * c);
    }
  }
  return g;
}

template <typename T>
PoolResult<T> maxpool_forward(const Tensor<T>& input, int pool, int stride) {
  require_rank(input.shape(), 4, "maxpool input");
  if (pool < 1 || stride < 1) shape_error("maxpool: pool and stride must be positive");
  const std::size_t b = input.dim(0), h = input.dim(1), w = input.dim(2), c = input.dim(3);
  const auto p = static_cast<std::size_t>(pool), s = static_cast<std::size_t>(stride);
  if (h < p || w < p) shape_error("maxpool: input smaller than the pool window");
  const std::size_t oh = (h - p) / s + 1, ow = (w - p) / s + 1;

  PoolResult<T> r{Tensor<T>({b, oh, ow, c}), std::vector<std::uint32_t>(b * oh * ow * c)};
  for (std::size_t n = 0; n < b; ++n)
    for (std::size_t y = 0; y < oh; ++y)
      for (std::size_t x = 0; x < ow; ++x) {
        const std::size_t o = ((n * oh + y) * ow + x) * c;
        T* out = r.output.data() + o;
        std::uint32_t* arg = r.argmax.data() + o;
        // Window positions visited in increasing flat index; strict '>' keeps
        // the first maximum on ties.
        for (std::size_t dy = 0; dy < p; ++dy)
          for (std::size_t dx = 0; dx < p; ++dx) {
            const std::size_t base = ((n * h + y * s + dy) * w + x * s + dx) * c;
            const T* in = input.data() + base;
            if (dy == 0 && dx == 0) {
              for (std::size_t ch = 0; ch < c; ++ch) {
                out[ch] = in[ch];
                arg[ch] = static_cast<std::uint32_t>(base + ch);
              }
              continue;
            }
            for (std::size_t ch = 0; ch < c; ++ch)
              if (in[ch] > out[ch]) {
                out[ch] = in[ch];
                arg[ch] = static_cast<std::uint32_t>(base + ch);
              }
          }
      }
  return r;
}

template <typename T>
Tensor<T> maxpool_backward(const std::vector<std::uint32_t>& argmax, const Shape& input_shape,
                           const Tensor<T>& grad_out) {
  if (argmax.size() != grad_out.size()) shape_error("maxpool_backward: cache does not match grad_out");
  Tensor<T> g(input_shape);
  for (std::size_t i = 0; i < argmax.size(); ++i) g[argmax[i]] += grad_out[i];
  return g;
}

template <typename T>
Tensor<T> dense_forward(const Tensor<T>& input, const Tensor<T>& weights, const Tensor<T>& bias,
                        Activation act) {
  require_rank(input.shape(), 2, "dense input");
  require_rank(weights.shape(), 2, "dense weights");
  const std::size_t b = input.dim(0), in = input.dim(1), out = weights.dim(0);
  if (weights.dim(1) != in)
    shape_error("dense: weights " + shape_string(weights.shape()) + " do not fit input " +
                shape_string(input.shape()));
  if (bias.size() != out) shape_error("dense: bias size must equal unit count");
  Tensor<T> y({b, out});
  const CMapR<T> x(input.data(), b, in);
  const CMapR<T> wm(weights.data(), out, in);
  MapR<T> ym(y.data(), b, out);
  ym.noalias() = x * wm.transpose();
  ym.rowwise() += Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>>(bias.data(), out);
  apply_activation(y, act);
  return y;
}

template <typename T>
DenseGrads<T> dense_backward(const Tensor<T>& input, const Tensor<T>& weights,
                             const Tensor<T>& output, const Tensor<T>& grad_out, Activation act) {
  const std::size_t b = input.dim(0), in = input.dim(1), out = weights.dim(0);
  if (grad_out.shape() != Shape{b, out} || output.shape() != Shape{b, out})
    shape_error("dense_backward: grad_out shape mismatch");
  Tensor<T> dz = grad_out;
  activation_backward(output, dz, act);
  DenseGrads<T> g{Tensor<T>({b, in}), Tensor<T>(weights.shape()), Tensor<T>({out})};
  const CMapR<T> x(input.data(), b, in);
  const CMapR<T> wm(weights.data(), out, in);
  const CMapR<T> dzm(dz.data(), b, out);
  MapR<T>(g.weights.data(), out, in).noalias() = dzm.transpose() * x;
  Eigen::Map<Eigen::Matrix<T, 1, Eigen::Dynamic>>(g.bias.data(), out) = dzm.colwise().sum();
  MapR<T>(g.input.data(), b, in).noalias() = dzm * wm;
  return g;
}

template <typename T>
DropoutResult<T> dropout_forward(const Tensor<T>& input, double p, Mode mode, RngStream& rng) {
  if (!(p >= 0.0 && p < 1.0)) throw Error(ErrorKind::InvalidProbability, "dropout rate must be in [0, 1)");
  if (mode == Mode::Eval || p == 0.0) return {input, Tensor<T>()};
  DropoutResult<T> r{Tensor<T>(input.shape()), Tensor<T>(input.shape())};
  const T keep_scale = static_cast<T>(1.0 / (1.0 - p));
  for (std::size_t i = 0; i < input.size(); ++i) {
    const T m = rng.uniform() < p ? T{0} : keep_scale;
    r.mask[i] = m;
    r.output[i] = input[i] * m;
  }
  return r;
}

template <typename T>
Tensor<T> dropout_backward(const Tensor<T>& mask, const Tensor<T>& grad_out) {
  if (mask.empty()) return grad_out;
  if (mask.size() != grad_out.size()) shape_error("dropout_backward: mask does not match grad_out");
  Tensor<T> g(grad_out.shape());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = grad_out[i] * mask[i];
  return g;
}

template <typename T>
MseResult<T> mse_loss(const Tensor<T>& pred, const Tensor<T>& target) {
  if (pred.shape() != target.shape())
    shape_error("mse_loss: prediction " + shape_string(pred.shape()) + " vs target " +
                shape_string(target.shape()));
  if (pred.empty()) shape_error("mse_loss: empty input");
  MseResult<T> r{0.0, Tensor<T>(pred.shape())};
  const double n = static_cast<double>(pred.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = static_cast<double>(pred[i]) - static_cast<double>(target[i]);
    sum += d * d;
    r.grad[i] = static_cast<T>(2.0 * d / n);
  }
  r.loss = sum / n;
  return r;
}

#define ARMPOSE_INSTANTIATE_LAYERS(T)                                                              \
  template void apply_activation<T>(Tensor<T>&, Activation);                                     \
  template void activation_backward<T>(const Tensor<T>&, Tensor<T>&, Activation);                \
  template Tensor<T> conv2d_forward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);     \
  template ConvGrads<T> conv2d_backward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, \
                                           bool);                                                \
  template PoolResult<T> maxpool_forward<T>(const Tensor<T>&, int, int);                          \
  template Tensor<T> maxpool_backward<T>(const std::vector<std::uint32_t>&, const Shape&,         \
                                         const Tensor<T>&);                                      \
  template Tensor<T> dense_forward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,       \
                                      Activation);                                               \
  template DenseGrads<T> dense_backward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, \
                                           const Tensor<T>&, Activation);                        \
  template DropoutResult<T> dropout_forward<T>(const Tensor<T>&, double, Mode, RngStream&);       \
  template Tensor<T> dropout_backward<T>(const Tensor<T>&, const Tensor<T>&);                     \
  template MseResult<T> mse_loss<T>(const Tensor<T>&, const Tensor<T>&);

ARMPOSE_INSTANTIATE_LAYERS(float)
ARMPOSE_INSTANTIATE_LAYERS(double)

}  // namespace armpose
