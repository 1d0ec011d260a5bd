#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "armpose/layers.hpp"
#include "armpose/rng.hpp"
#include "armpose/tensor.hpp"

namespace armpose {

enum class LayerKind : std::uint8_t { Conv2d = 1, MaxPool = 2, Flatten = 3, Dropout = 4, Dense = 5 };

const char* to_string(LayerKind k) noexcept;

struct LayerSpec {
  LayerKind kind = LayerKind::Flatten;
  int filters = 0;  // conv
  int kernel = 0;   // conv
  int pool = 0;     // maxpool
  int stride = 0;   // maxpool
  int units = 0;    // dense
  double rate = 0.0;  // dropout
  Activation activation = Activation::Linear;

  static LayerSpec conv2d(int filters, int kernel, Activation act = Activation::Linear);
  static LayerSpec maxpool(int pool, int stride);
  static LayerSpec flatten();
  static LayerSpec dropout(double p);
  static LayerSpec dense(int units, Activation act);

  bool parametric() const { return kind == LayerKind::Conv2d || kind == LayerKind::Dense; }
  bool operator==(const LayerSpec&) const = default;
};

struct NetworkSpec {
  int input_height = 64;
  int input_width = 64;
  int input_channels = 4;
  std::vector<LayerSpec> layers;

  Shape input_shape() const;
  /// Per-layer output shape for one sample. Throws ShapeMismatch on an
  /// incompatible chain or InvalidProbability on a bad dropout rate.
  std::vector<Shape> layer_shapes() const;
  void validate() const { (void)layer_shapes(); }
  std::size_t output_size() const;
  /// Weight shape of layer i ([K, K, C, F] or [out, in]); empty if not parametric.
  Shape weight_shape(std::size_t i) const;

  bool operator==(const NetworkSpec&) const = default;
};

/// conv(32, 4x4) -> pool(2, 2) -> conv(32, 3x3) -> pool(2, 2) -> flatten ->
/// dropout -> dense(200, tanh) -> dropout -> dense(100, tanh) -> dropout ->
/// dense(outputs, tanh).
NetworkSpec flagship_spec(int height = 64, int width = 64, double dropout_p = 0.05,
                          Activation conv_activation = Activation::Linear, int outputs = 7);

/// Weights and biases per layer index; empty tensors for non-parametric layers.
template <typename T>
struct NetworkParams {
  std::vector<Tensor<T>> weights;
  std::vector<Tensor<T>> biases;
  std::uint64_t init_seed = 0;

  std::size_t parameter_count() const;
  bool all_finite() const;

  template <typename U>
  NetworkParams<U> cast() const {
    NetworkParams<U> out;
    out.init_seed = init_seed;
    for (const auto& w : weights) out.weights.push_back(w.template cast<U>());
    for (const auto& b : biases) out.biases.push_back(b.template cast<U>());
    return out;
  }
  bool operator==(const NetworkParams&) const = default;
};

/// Weights uniform in +-sqrt(1 / fan_in) drawn in layer order from
/// RngStream(seed); biases zero.
template <typename T>
NetworkParams<T> init_params(const NetworkSpec& spec, std::uint64_t seed);

/// Zero tensors shaped like `spec`'s parameters.
template <typename T>
NetworkParams<T> zero_params(const NetworkSpec& spec);

/// Throws ShapeMismatch if `params` do not fit `spec`.
template <typename T>
void check_params(const NetworkSpec& spec, const NetworkParams<T>& params);

template <typename T>
struct ForwardCache {
  /// activations[i] is the input of layer i; the last entry is the output.
  std::vector<Tensor<T>> activations;
  std::vector<std::vector<std::uint32_t>> argmax;
  std::vector<Tensor<T>> dropout_masks;
};

template <typename T>
struct ForwardResult {
  Tensor<T> output;  // [B, outputs]
  ForwardCache<T> cache;
};

/// `input` is [B, H, W, C] or a single [H, W, C] sample. Eval mode never
/// touches `rng` and treats dropout as identity. Throws ShapeMismatch.
template <typename T>
ForwardResult<T> forward(const NetworkSpec& spec, const NetworkParams<T>& params,
                         const Tensor<T>& input, Mode mode, RngStream& rng,
                         bool keep_cache = true);

/// Output only, eval mode.
template <typename T>
Tensor<T> predict(const NetworkSpec& spec, const NetworkParams<T>& params, const Tensor<T>& input);

/// Gradients of the loss with respect to every parameter given dL/d(output).
template <typename T>
NetworkParams<T> backward(const NetworkSpec& spec, const NetworkParams<T>& params,
                          const ForwardCache<T>& cache, const Tensor<T>& grad_output);

template <typename T>
struct AdamState {
  NetworkParams<T> m;
  NetworkParams<T> v;
  std::uint64_t step = 0;
  double lr = 1e-6;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

template <typename T>
AdamState<T> make_adam(const NetworkSpec& spec, double lr, double beta1 = 0.9, double beta2 = 0.999,
                       double epsilon = 1e-8);

/// One bias-corrected Adam update; increments the step counter.
template <typename T>
void adam_step(NetworkParams<T>& params, const NetworkParams<T>& grads, AdamState<T>& state);

struct GradCheckOptions {
  std::size_t samples = 256;
  double step = 1e-4;
  std::uint64_t seed = 0;
  Mode mode = Mode::Train;
  /// Applied to the analytic gradients before comparison (used to confirm the
  /// checker notices a broken backward pass).
  std::function<void(NetworkParams<double>&)> tamper;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  /// Coordinates left out because a probe changed a max-pool selection.
  std::size_t skipped_kinks = 0;
  std::size_t worst_layer = 0;
  std::size_t worst_index = 0;
};

/// Central-difference check of the MSE loss gradient over a random subset of
/// parameters (all of them if fewer than `samples`). Relative error is
/// |a - n| / max(|a|, |n|, 1e-7). Coordinates whose probes change a max-pool
/// selection are skipped, since the loss is not differentiable across them.
GradCheckResult grad_check(const NetworkSpec& spec, const NetworkParams<double>& params,
                           const Tensor<double>& input, const Tensor<double>& target,
                           const GradCheckOptions& options = {});

/// Angles in degrees <-> network targets: y = angle / (bound * margin).
class TargetScaler {
 public:
  explicit TargetScaler(double bound_deg = 55.0, double margin = 1.0);

  /// Throws OutOfBound if |angle| > bound.
  double scale(double angle_deg) const;
  double unscale(double y) const { return y * divisor_; }
  double bound() const noexcept { return bound_; }
  double margin() const noexcept { return margin_; }

 private:
  double bound_;
  double margin_;
  double divisor_;
};

/// ANN1 model file; see README for the byte layout.
std::string encode_model(const NetworkSpec& spec, const NetworkParams<float>& params);

struct LoadedModel {
  NetworkSpec spec;
  NetworkParams<float> params;
};

/// Throws VersionMismatch or ParseError (bad magic, truncation, checksum).
LoadedModel decode_model(std::string_view bytes);

void save_model(const NetworkSpec& spec, const NetworkParams<float>& params, const std::string& path);
LoadedModel load_model(const std::string& path);

}  // namespace armpose
