#pragma once

// Per-layer kernels on batched tensors. Image tensors are [B, H, W, C];
// vectors are [B, N]. Convolutions are cross-correlations (no kernel flip)
// with stride 1 and valid padding.

#include <cstdint>
#include <string_view>
#include <vector>

#include "armpose/rng.hpp"
#include "armpose/tensor.hpp"

namespace armpose {

enum class Activation : std::uint8_t { Linear = 0, Tanh = 1, Relu = 2 };
enum class Mode { Train, Eval };

const char* to_string(Activation a) noexcept;
Activation activation_from_string(std::string_view s);

/// In place.
template <typename T>
void apply_activation(Tensor<T>& t, Activation act);

/// grad_out *= f'(z), written in terms of the activated output y = f(z).
template <typename T>
void activation_backward(const Tensor<T>& output, Tensor<T>& grad, Activation act);

/// weights [K, K, C, F], bias [F]; output [B, H-K+1, W-K+1, F] before activation.
template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& weights, const Tensor<T>& bias);

template <typename T>
struct ConvGrads {
  Tensor<T> input;  // empty when not requested
  Tensor<T> weights;
  Tensor<T> bias;
};

/// `grad_out` is with respect to the pre-activation output.
template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& input, const Tensor<T>& weights,
                             const Tensor<T>& grad_out, bool need_input_grad = true);

template <typename T>
struct PoolResult {
  Tensor<T> output;
  /// Flat input index of each output element's maximum.
  std::vector<std::uint32_t> argmax;
};

/// Floor semantics: trailing rows/columns that do not fill a window are dropped.
/// Ties go to the smallest flat index within the window.
template <typename T>
PoolResult<T> maxpool_forward(const Tensor<T>& input, int pool, int stride);

template <typename T>
Tensor<T> maxpool_backward(const std::vector<std::uint32_t>& argmax, const Shape& input_shape,
                           const Tensor<T>& grad_out);

/// input [B, in], weights [out, in], bias [out]; returns act(x W^T + b).
template <typename T>
Tensor<T> dense_forward(const Tensor<T>& input, const Tensor<T>& weights, const Tensor<T>& bias,
                        Activation act);

template <typename T>
struct DenseGrads {
  Tensor<T> input;
  Tensor<T> weights;
  Tensor<T> bias;
};

/// `output` is the activated forward output; `grad_out` is dL/d(output).
template <typename T>
DenseGrads<T> dense_backward(const Tensor<T>& input, const Tensor<T>& weights,
                             const Tensor<T>& output, const Tensor<T>& grad_out, Activation act);

template <typename T>
struct DropoutResult {
  Tensor<T> output;
  /// Per-element multiplier: 0 or 1 / (1 - p). Empty in eval mode.
  Tensor<T> mask;
};

/// Inverted dropout. Throws InvalidProbability unless 0 <= p < 1.
template <typename T>
DropoutResult<T> dropout_forward(const Tensor<T>& input, double p, Mode mode, RngStream& rng);

template <typename T>
Tensor<T> dropout_backward(const Tensor<T>& mask, const Tensor<T>& grad_out);

template <typename T>
struct MseResult {
  double loss = 0.0;
  Tensor<T> grad;
};

/// Mean of squared errors over every entry; grad = 2 (pred - target) / count.
template <typename T>
MseResult<T> mse_loss(const Tensor<T>& pred, const Tensor<T>& target);

}  // namespace armpose
