#include "armpose/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>

#include "armpose/io.hpp"

namespace armpose {

namespace {
[[noreturn]] void shape_error(const std::string& what) { throw Error(ErrorKind::ShapeMismatch, what); }
}  // namespace

const char* to_string(LayerKind k) noexcept {
  switch (k) {
    case LayerKind::Conv2d: return "conv2d";
    case LayerKind::MaxPool: return "maxpool";
    case LayerKind::Flatten: return "flatten";
    case LayerKind::Dropout: return "dropout";
    case LayerKind::Dense: return "dense";
  }
  return "unknown";
}

LayerSpec LayerSpec::conv2d(int filters, int kernel, Activation act) {
  LayerSpec l;
  l.kind = LayerKind::Conv2d;
  l.filters = filters;
  l.kernel = kernel;
  l.activation = act;
  return l;
}

LayerSpec LayerSpec::maxpool(int pool, int stride) {
  LayerSpec l;
  l.kind = LayerKind::MaxPool;
  l.pool = pool;
  l.stride = stride;
  return l;
}

LayerSpec LayerSpec::flatten() { return LayerSpec{}; }

LayerSpec LayerSpec::dropout(double p) {
  LayerSpec l;
  l.kind = LayerKind::Dropout;
  l.rate = p;
  return l;
}

LayerSpec LayerSpec::dense(int units, Activation act) {
  LayerSpec l;
  l.kind = LayerKind::Dense;
  l.units = units;
  l.activation = act;
  return l;
}

Shape NetworkSpec::input_shape() const {
  return {static_cast<std::size_t>(input_height), static_cast<std::size_t>(input_width),
          static_cast<std::size_t>(input_channels)};
}

std::vector<Shape> NetworkSpec::layer_shapes() const {
  if (input_height < 1 || input_width < 1 || input_channels < 1) shape_error("network input must be non-empty");
  std::vector<Shape> shapes;
  Shape s = input_shape();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const std::string where = "layer " + std::to_string(i + 1) + " (" + to_string(l.kind) + "): ";
    switch (l.kind) {
      case LayerKind::Conv2d: {
        if (s.size() != 3) shape_error(where + "needs an image input, got " + shape_string(s));
        if (l.filters < 1 || l.kernel < 1) shape_error(where + "filters and kernel must be positive");
        const auto k = static_cast<std::size_t>(l.kernel);
        if (k > s[0] || k > s[1]) shape_error(where + "kernel larger than input " + shape_string(s));
        s = {s[0] - k + 1, s[1] - k + 1, static_cast<std::size_t>(l.filters)};
        break;
      }
      case LayerKind::MaxPool: {
        if (s.size() != 3) shape_error(where + "needs an image input, got " + shape_string(s));
        if (l.pool < 1 || l.stride < 1) shape_error(where + "pool and stride must be positive");
        const auto p = static_cast<std::size_t>(l.pool), st = static_cast<std::size_t>(l.stride);
        if (p > s[0] || p > s[1]) shape_error(where + "pool larger than input " + shape_string(s));
        s = {(s[0] - p) / st + 1, (s[1] - p) / st + 1, s[2]};
        break;
      }
      case LayerKind::Flatten:
        s = {shape_size(s)};
        break;
      case LayerKind::Dropout:
        if (!(l.rate >= 0.0 && l.rate < 1.0))
          throw Error(ErrorKind::InvalidProbability, where + "rate must be in [0, 1)");
        break;
      case LayerKind::Dense:
        if (s.size() != 1) shape_error(where + "needs a flat input, got " + shape_string(s));
        if (l.units < 1) shape_error(where + "units must be positive");
        s = {static_cast<std::size_t>(l.units)};
        break;
    }
    shapes.push_back(s);
  }
  if (shapes.empty() || shapes.back().size() != 1) shape_error("network must end in a flat output");
  return shapes;
}

std::size_t NetworkSpec::output_size() const { return layer_shapes().back()[0]; }

Shape NetworkSpec::weight_shape(std::size_t i) const {
  const auto& l = layers.at(i);
  if (!l.parametric()) return {};
  const auto shapes = layer_shapes();
  const Shape in = i == 0 ? input_shape() : shapes[i - 1];
  if (l.kind == LayerKind::Conv2d) {
    const auto k = static_cast<std::size_t>(l.kernel);
    return {k, k, in[2], static_cast<std::size_t>(l.filters)};
  }
  return {static_cast<std::size_t>(l.units), in[0]};
}

NetworkSpec flagship_spec(int height, int width, double dropout_p, Activation conv_activation, int outputs) {
  NetworkSpec spec;
  spec.input_height = height;
  spec.input_width = width;
  spec.input_channels = 4;
  spec.layers = {
      LayerSpec::conv2d(32, 4, conv_activation),
      LayerSpec::maxpool(2, 2),
      LayerSpec::conv2d(32, 3, conv_activation),
      LayerSpec::maxpool(2, 2),
      LayerSpec::flatten(),
      LayerSpec::dropout(dropout_p),
      LayerSpec::dense(200, Activation::Tanh),
      LayerSpec::dropout(dropout_p),
      LayerSpec::dense(100, Activation::Tanh),
      LayerSpec::dropout(dropout_p),
      LayerSpec::dense(outputs, Activation::Tanh),
  };
  spec.validate();
  return spec;
}

template <typename T>
std::size_t NetworkParams<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& w : weights) n += w.size();
  for (const auto& b : biases) n += b.size();
  return n;
}

template <typename T>
bool NetworkParams<T>::all_finite() const {
  for (const auto& w : weights)
    if (!w.all_finite()) return false;
  for (const auto& b : biases)
    if (!b.all_finite()) return false;
  return true;
}

template <typename T>
NetworkParams<T> zero_params(const NetworkSpec& spec) {
  spec.validate();
  NetworkParams<T> p;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const Shape ws = spec.weight_shape(i);
    if (ws.empty()) {
      p.weights.emplace_back();
      p.biases.emplace_back();
      continue;
    }
    const std::size_t out = spec.layers[i].kind == LayerKind::Conv2d ? ws.back() : ws.front();
    p.weights.emplace_back(ws);
    p.biases.emplace_back(Shape{out});
  }
  return p;
}

template <typename T>
NetworkParams<T> init_params(const NetworkSpec& spec, std::uint64_t seed) {
  auto p = zero_params<T>(spec);
  p.init_seed = seed;
  RngStream rng(seed);
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    auto& w = p.weights[i];
    if (w.empty()) continue;
    const std::size_t fan_in = spec.layers[i].kind == LayerKind::Conv2d
                                   ? w.dim(0) * w.dim(1) * w.dim(2)
                                   : w.dim(1);
    const double bound = std::sqrt(1.0 / static_cast<double>(fan_in));
    for (auto& v : w.values()) v = static_cast<T>(rng.uniform(-bound, bound));
  }
  return p;
}

template <typename T>
void check_params(const NetworkSpec& spec, const NetworkParams<T>& params) {
  const auto expected = zero_params<T>(spec);
  if (params.weights.size() != expected.weights.size() || params.biases.size() != expected.biases.size())
    shape_error("parameters do not match the network's layer count");
  for (std::size_t i = 0; i < expected.weights.size(); ++i)
    if (params.weights[i].shape() != expected.weights[i].shape() ||
        params.biases[i].shape() != expected.biases[i].shape())
      shape_error("parameters of layer " + std::to_string(i + 1) + " do not match the network");
}

template <typename T>
ForwardResult<T> forward(const NetworkSpec& spec, const NetworkParams<T>& params,
                         const Tensor<T>& input, Mode mode, RngStream& rng, bool keep_cache) {
  Tensor<T> x = input.rank() == 3 ? input.reshaped({1, input.dim(0), input.dim(1), input.dim(2)}) : input;
  const Shape want = spec.input_shape();
  if (x.rank() != 4 || x.dim(1) != want[0] || x.dim(2) != want[1] || x.dim(3) != want[2])
    shape_error("network expects input [B]x" + shape_string(want) + ", got " + shape_string(input.shape()));
  const std::size_t batch = x.dim(0);
  const std::size_t n = spec.layers.size();

  ForwardResult<T> res;
  auto& cache = res.cache;
  if (keep_cache) {
    cache.activations.reserve(n + 1);
    cache.argmax.resize(n);
    cache.dropout_masks.resize(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& l = spec.layers[i];
    Tensor<T> held;
    if (keep_cache) {
      cache.activations.push_back(std::move(x));
    } else {
      held = std::move(x);
    }
    const Tensor<T>& in = keep_cache ? cache.activations.back() : held;
    switch (l.kind) {
      case LayerKind::Conv2d:
        x = conv2d_forward(in, params.weights[i], params.biases[i]);
        apply_activation(x, l.activation);
        break;
      case LayerKind::MaxPool: {
        auto r = maxpool_forward(in, l.pool, l.stride);
        x = std::move(r.output);
        if (keep_cache) cache.argmax[i] = std::move(r.argmax);
        break;
      }
      case LayerKind::Flatten:
        x = in.reshaped({batch, in.size() / batch});
        break;
      case LayerKind::Dropout: {
        auto r = dropout_forward(in, l.rate, mode, rng);
        x = std::move(r.output);
        if (keep_cache) cache.dropout_masks[i] = std::move(r.mask);
        break;
      }
      case LayerKind::Dense:
        x = dense_forward(in, params.weights[i], params.biases[i], l.activation);
        break;
    }
  }
  if (keep_cache) cache.activations.push_back(x);
  res.output = std::move(x);
  return res;
}

template <typename T>
Tensor<T> predict(const NetworkSpec& spec, const NetworkParams<T>& params, const Tensor<T>& input) {
  RngStream unused;
  return forward(spec, params, input, Mode::Eval, unused, false).output;
}

template <typename T>
NetworkParams<T> backward(const NetworkSpec& spec, const NetworkParams<T>& params,
                          const ForwardCache<T>& cache, const Tensor<T>& grad_output) {
  const std::size_t n = spec.layers.size();
  if (cache.activations.size() != n + 1) shape_error("backward: forward cache is incomplete");
  if (grad_output.shape() != cache.activations.back().shape())
    shape_error("backward: gradient shape does not match network output");
  NetworkParams<T> grads = zero_params<T>(spec);
  Tensor<T> g = grad_output;
  for (std::size_t i = n; i-- > 0;) {
    const auto& l = spec.layers[i];
    const Tensor<T>& in = cache.activations[i];
    const Tensor<T>& out = cache.activations[i + 1];
    switch (l.kind) {
      case LayerKind::Conv2d: {
        activation_backward(out, g, l.activation);
        auto cg = conv2d_backward(in, params.weights[i], g, i > 0);
        grads.weights[i] = std::move(cg.weights);
        grads.biases[i] = std::move(cg.bias);
        g = std::move(cg.input);
        break;
      }
      case LayerKind::MaxPool:
        g = maxpool_backward(cache.argmax[i], in.shape(), g);
        break;
      case LayerKind::Flatten:
        g = std::move(g).reshaped(in.shape());
        break;
      case LayerKind::Dropout:
        g = dropout_backward(cache.dropout_masks[i], g);
        break;
      case LayerKind::Dense: {
        auto dg = dense_backward(in, params.weights[i], out, g, l.activation);
        grads.weights[i] = std::move(dg.weights);
        grads.biases[i] = std::move(dg.bias);
        g = std::move(dg.input);
        break;
      }
    }
  }
  return grads;
}

template <typename T>
AdamState<T> make_adam(const NetworkSpec& spec, double lr, double beta1, double beta2, double epsilon) {
  AdamState<T> s;
  s.m = zero_params<T>(spec);
  s.v = zero_params<T>(spec);
  s.lr = lr;
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.epsilon = epsilon;
  return s;
}

template <typename T>
void adam_step(NetworkParams<T>& params, const NetworkParams<T>& grads, AdamState<T>& state) {
  if (grads.weights.size() != params.weights.size() || state.m.weights.size() != params.weights.size())
    shape_error("adam_step: parameter, gradient and state layouts differ");
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const T b1 = static_cast<T>(state.beta1), b2 = static_cast<T>(state.beta2);
  const T c1 = static_cast<T>(1.0 / (1.0 - std::pow(state.beta1, t)));
  const T c2 = static_cast<T>(1.0 / (1.0 - std::pow(state.beta2, t)));
  const T lr = static_cast<T>(state.lr), eps = static_cast<T>(state.epsilon);

  auto update = [&](Tensor<T>& p, const Tensor<T>& g, Tensor<T>& m, Tensor<T>& v) {
    if (p.size() != g.size() || p.size() != m.size() || p.size() != v.size())
      shape_error("adam_step: tensor size mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = b1 * m[i] + (T{1} - b1) * g[i];
      v[i] = b2 * v[i] + (T{1} - b2) * g[i] * g[i];
      const T mhat = m[i] * c1;
      const T vhat = v[i] * c2;
      p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  };
  for (std::size_t i = 0; i < params.weights.size(); ++i) {
    update(params.weights[i], grads.weights[i], state.m.weights[i], state.v.weights[i]);
    update(params.biases[i], grads.biases[i], state.m.biases[i], state.v.biases[i]);
  }
}

GradCheckResult grad_check(const NetworkSpec& spec, const NetworkParams<double>& params,
                           const Tensor<double>& input, const Tensor<double>& target,
                           const GradCheckOptions& options) {
  check_params(spec, params);
  RngStream rng(options.seed);
  const auto fwd = forward(spec, params, input, options.mode, rng, true);
  // A probe that moves a max-pool winner straddles a kink; the loss and a flag for that.
  auto loss_at = [&](const NetworkParams<double>& p) {
    RngStream probe_rng(options.seed);
    const auto r = forward(spec, p, input, options.mode, probe_rng, true);
    return std::pair{mse_loss(r.output, target).loss, r.cache.argmax != fwd.cache.argmax};
  };
  auto analytic = backward(spec, params, fwd.cache, mse_loss(fwd.output, target).grad);
  if (options.tamper) options.tamper(analytic);

  // Coordinates are shared out evenly between parameter tensors; a tensor
  // smaller than its share is checked in full and the rest passes on.
  struct Slot {
    std::size_t layer;
    bool bias;
    std::size_t size;
  };
  std::vector<Slot> slots;
  for (std::size_t i = 0; i < params.weights.size(); ++i)
    if (!params.weights[i].empty()) {
      slots.push_back({i, false, params.weights[i].size()});
      slots.push_back({i, true, params.biases[i].size()});
    }
  GradCheckResult result;
  if (slots.empty()) return result;
  std::vector<std::size_t> order(slots.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return slots[a].size < slots[b].size; });
  std::vector<std::size_t> quota(slots.size());
  std::size_t left = options.samples;
  for (std::size_t n = 0; n < order.size(); ++n) {
    const std::size_t share = (left + (order.size() - n) - 1) / (order.size() - n);
    quota[order[n]] = std::min(slots[order[n]].size, share);
    left -= std::min(left, quota[order[n]]);
  }

  RngStream pick(options.seed ^ 0x5DEECE66DULL);
  NetworkParams<double> probe = params;
  for (std::size_t si = 0; si < slots.size(); ++si) {
    const auto& slot = slots[si];
    auto& tensor = slot.bias ? probe.biases[slot.layer] : probe.weights[slot.layer];
    const auto& grad = slot.bias ? analytic.biases[slot.layer] : analytic.weights[slot.layer];
    std::vector<std::size_t> indices;
    if (tensor.size() <= quota[si]) {
      for (std::size_t k = 0; k < tensor.size(); ++k) indices.push_back(k);
    } else {
      for (std::size_t k = 0; k < quota[si]; ++k) indices.push_back(pick.below(tensor.size()));
    }
    for (std::size_t idx : indices) {
      const double original = tensor[idx];
      tensor[idx] = original + options.step;
      const auto [up, up_kink] = loss_at(probe);
      tensor[idx] = original - options.step;
      const auto [down, down_kink] = loss_at(probe);
      tensor[idx] = original;
      if (up_kink || down_kink) {
        ++result.skipped_kinks;
        continue;
      }
      const double numeric = (up - down) / (2.0 * options.step);
      const double a = grad[idx];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-7});
      const double rel = std::abs(a - numeric) / denom;
      ++result.checked;
      if (rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_layer = slot.layer;
        result.worst_index = idx;
      }
    }
  }
  return result;
}

TargetScaler::TargetScaler(double bound_deg, double margin)
    : bound_(bound_deg), margin_(margin), divisor_(bound_deg * margin) {
  if (!(bound_deg > 0.0) || !(margin > 0.0))
    throw Error(ErrorKind::InvalidConfig, "target bound and margin must be positive");
}

double TargetScaler::scale(double angle_deg) const {
  if (!(std::abs(angle_deg) <= bound_))
    throw Error(ErrorKind::OutOfBound, "angle outside the target bound");
  return angle_deg / divisor_;
}

namespace {

constexpr std::uint32_t kModelVersion = 1;

std::uint32_t float_bits(float f) {
  std::uint32_t b;
  std::memcpy(&b, &f, 4);
  return b;
}

float bits_float(std::uint32_t b) {
  float f;
  std::memcpy(&f, &b, 4);
  return f;
}

// The float's shortest decimal form read back as a double, so a rate written
// as 0.05 loads as the double 0.05.
double widen_decimal(float f) {
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof buf, f).ptr;
  double d = 0.0;
  std::from_chars(buf, end, d);
  return d;
}

}  // namespace

std::string encode_model(const NetworkSpec& spec, const NetworkParams<float>& params) {
  check_params(spec, params);
  ByteWriter w;
  w.bytes("ANN1");
  w.u32(kModelVersion);
  w.u32(static_cast<std::uint32_t>(spec.layers.size()));
  w.u32(3);
  w.u32(static_cast<std::uint32_t>(spec.input_height));
  w.u32(static_cast<std::uint32_t>(spec.input_width));
  w.u32(static_cast<std::uint32_t>(spec.input_channels));
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const auto& l = spec.layers[i];
    w.u8(static_cast<std::uint8_t>(l.kind));
    std::vector<std::uint32_t> dims;
    std::uint32_t attr = 0;
    switch (l.kind) {
      case LayerKind::Conv2d:
      case LayerKind::Dense:
        for (auto d : params.weights[i].shape()) dims.push_back(static_cast<std::uint32_t>(d));
        attr = static_cast<std::uint32_t>(l.activation);
        break;
      case LayerKind::MaxPool:
        dims = {static_cast<std::uint32_t>(l.pool), static_cast<std::uint32_t>(l.stride)};
        break;
      case LayerKind::Flatten:
        break;
      case LayerKind::Dropout:
        attr = float_bits(static_cast<float>(l.rate));
        break;
    }
    w.u32(static_cast<std::uint32_t>(dims.size()));
    for (auto d : dims) w.u32(d);
    w.u32(attr);
    if (l.parametric()) {
      for (float f : params.weights[i].values()) w.f32(f);
      for (float f : params.biases[i].values()) w.f32(f);
    }
  }
  w.u64(crc64(w.str()));
  return std::move(w.str());
}

LoadedModel decode_model(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.bytes(4) != "ANN1") throw ParseError(0, "not an ANN1 model file (bad magic)");
  const auto version = r.u32();
  if (version != kModelVersion)
    throw Error(ErrorKind::VersionMismatch, "model file version " + std::to_string(version) +
                                                " is not supported (expected " +
                                                std::to_string(kModelVersion) + ")");
  if (bytes.size() < 8 + 8) throw ParseError(0, "model file truncated");
  const auto stored_crc_pos = bytes.size() - 8;

  LoadedModel m;
  const auto count = r.u32();
  if (count == 0 || count > 1024) throw ParseError(0, "implausible layer count");
  if (r.u32() != 3) throw ParseError(0, "input descriptor must have rank 3");
  m.spec.input_height = static_cast<int>(r.u32());
  m.spec.input_width = static_cast<int>(r.u32());
  m.spec.input_channels = static_cast<int>(r.u32());

  std::vector<std::vector<float>> weight_data, bias_data;
  std::vector<Shape> weight_shapes;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto tag = r.u8();
    const auto rank = r.u32();
    if (rank > 8) throw ParseError(0, "implausible layer rank");
    std::vector<std::uint32_t> dims(rank);
    for (auto& d : dims) d = r.u32();
    const auto attr = r.u32();
    LayerSpec l;
    Shape ws;
    auto act = [&] {
      if (attr > 2) throw ParseError(0, "unknown activation code");
      return static_cast<Activation>(attr);
    };
    switch (static_cast<LayerKind>(tag)) {
      case LayerKind::Conv2d:
        if (rank != 4 || dims[0] != dims[1]) throw ParseError(0, "conv2d descriptor must be [K,K,C,F]");
        l = LayerSpec::conv2d(static_cast<int>(dims[3]), static_cast<int>(dims[0]), act());
        ws.assign(dims.begin(), dims.end());
        break;
      case LayerKind::MaxPool:
        if (rank != 2) throw ParseError(0, "maxpool descriptor must be [pool,stride]");
        l = LayerSpec::maxpool(static_cast<int>(dims[0]), static_cast<int>(dims[1]));
        break;
      case LayerKind::Flatten:
        if (rank != 0) throw ParseError(0, "flatten descriptor must be empty");
        l = LayerSpec::flatten();
        break;
      case LayerKind::Dropout:
        if (rank != 0) throw ParseError(0, "dropout descriptor must be empty");
        l = LayerSpec::dropout(widen_decimal(bits_float(attr)));
        break;
      case LayerKind::Dense:
        if (rank != 2) throw ParseError(0, "dense descriptor must be [out,in]");
        l = LayerSpec::dense(static_cast<int>(dims[0]), act());
        ws.assign(dims.begin(), dims.end());
        break;
      default:
        throw ParseError(0, "unknown layer tag " + std::to_string(tag));
    }
    m.spec.layers.push_back(l);
    std::vector<float> wv, bv;
    if (l.parametric()) {
      const std::size_t wn = shape_size(ws);
      const std::size_t bn = l.kind == LayerKind::Conv2d ? ws.back() : ws.front();
      if (r.remaining() < (wn + bn) * 4 + 8) throw ParseError(0, "model file truncated");
      wv.resize(wn);
      bv.resize(bn);
      for (auto& f : wv) f = r.f32();
      for (auto& f : bv) f = r.f32();
    }
    weight_shapes.push_back(ws);
    weight_data.push_back(std::move(wv));
    bias_data.push_back(std::move(bv));
  }
  if (r.position() != stored_crc_pos) throw ParseError(0, "model file has trailing or missing bytes");
  const auto stored = r.u64();
  if (stored != crc64(bytes.substr(0, stored_crc_pos))) throw ParseError(0, "model checksum mismatch");

  try {
    m.spec.validate();
  } catch (const Error& e) {
    throw ParseError(0, std::string("model describes an invalid network: ") + e.what());
  }
  for (std::size_t i = 0; i < m.spec.layers.size(); ++i) {
    if (weight_shapes[i].empty()) {
      m.params.weights.emplace_back();
      m.params.biases.emplace_back();
      continue;
    }
    const Shape bs{bias_data[i].size()};
    m.params.weights.emplace_back(weight_shapes[i], std::move(weight_data[i]));
    m.params.biases.emplace_back(bs, std::move(bias_data[i]));
  }
  try {
    check_params(m.spec, m.params);
  } catch (const Error& e) {
    throw ParseError(0, std::string("model weights do not fit its layers: ") + e.what());
  }
  return m;
}

void save_model(const NetworkSpec& spec, const NetworkParams<float>& params, const std::string& path) {
  write_file(path, encode_model(spec, params));
}

LoadedModel load_model(const std::string& path) { return decode_model(read_file(path)); }

#define ARMPOSE_INSTANTIATE_NETWORK(T)                                                           \
  template struct NetworkParams<T>;                                                            \
  template NetworkParams<T> zero_params<T>(const NetworkSpec&);                                 \
  template NetworkParams<T> init_params<T>(const NetworkSpec&, std::uint64_t);                  \
  template void check_params<T>(const NetworkSpec&, const NetworkParams<T>&);                   \
  template ForwardResult<T> forward<T>(const NetworkSpec&, const NetworkParams<T>&,             \
                                       const Tensor<T>&, Mode, RngStream&, bool);               \
  template Tensor<T> predict<T>(const NetworkSpec&, const NetworkParams<T>&, const Tensor<T>&); \
  template NetworkParams<T> backward<T>(const NetworkSpec&, const NetworkParams<T>&,            \
                                        const ForwardCache<T>&, const Tensor<T>&);              \
  template AdamState<T> make_adam<T>(const NetworkSpec&, double, double, double, double);       \
  template void adam_step<T>(NetworkParams<T>&, const NetworkParams<T>&, AdamState<T>&);

ARMPOSE_INSTANTIATE_NETWORK(float)
ARMPOSE_INSTANTIATE_NETWORK(double)

}  // namespace armpose
