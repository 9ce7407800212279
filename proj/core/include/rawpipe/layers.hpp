// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <vector>

#include "rawpipe/tensor.hpp"

namespace rawpipe {

// 2D cross-correlation, stride 1, same (zero) padding, kernel size 1 or 3.
class Conv2d {
 public:
  Conv2d(int in_ch, int out_ch, int kernel);

  Tensor4 forward(const Tensor4& x, bool keep_cache);
  Tensor4 backward(const Tensor4& gout);  // accumulates wgrad/bgrad, returns gx

  int in_ch() const { return in_ch_; }
  int out_ch() const { return out_ch_; }
  int kernel() const { return k_; }

  std::vector<double> weight;  // [out][in][k][k]
  std::vector<double> bias;    // [out]
  std::vector<double> wgrad;
  std::vector<double> bgrad;

  void drop_cache() { x_cache_ = Tensor4(); }

 private:
  int in_ch_, out_ch_, k_;
  Tensor4 x_cache_;
};

// Per-channel batch normalization with learnable scale/shift. Training mode
// normalizes with biased batch statistics (epsilon 1e-5) and updates running
// statistics with momentum 0.9; eval mode normalizes with the running values.
class BatchNorm {
 public:
  explicit BatchNorm(int channels);

  Tensor4 forward(const Tensor4& x, NnMode mode);
  Tensor4 backward(const Tensor4& gout);  // accumulates ggamma/gbeta, returns gx

  int channels() const { return ch_; }

  std::vector<double> gamma, beta;
  std::vector<double> ggamma, gbeta;
  std::vector<double> running_mean, running_var;

  static constexpr double kEps = 1e-5;
  static constexpr double kMomentum = 0.9;

  void drop_cache();

 private:
  int ch_;
  Tensor4 xhat_cache_;
  std::vector<double> inv_std_cache_;
};

// Elementwise max(x, 0).
class ReLU {
 public:
  Tensor4 forward(const Tensor4& x, bool keep_cache);
  Tensor4 backward(const Tensor4& gout);
  void drop_cache() { mask_.clear(); }

 private:
  std::vector<unsigned char> mask_;
};

}  // namespace rawpipe
