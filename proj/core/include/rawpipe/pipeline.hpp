// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <string>
#include <vector>

#include "rawpipe/bayer.hpp"
#include "rawpipe/demosaic.hpp"
#include "rawpipe/network.hpp"

namespace rawpipe {

// Image <-> tensor bridging. Tensors are NCHW with channels ordered R, G, B.
Tensor4 to_tensor(const RgbImage& x);
Tensor4 stack_to_tensor(const std::vector<RgbImage>& xs);
RgbImage to_image(const Tensor4& t, int n = 0);

// Batch-normalized half-squared error: (1/(2N)) * sum over the batch of the
// squared Frobenius norm of (pred_i - target_i), with N the batch size
// (tensor dimension n). A single 3-channel pixel with error (1,2,2) scores
// (1+4+4)/2 = 4.5. When `grad` is non-null it receives
// d(loss)/d(pred) = (pred - target) / N.
double half_mse_loss(const Tensor4& pred, const Tensor4& target, Tensor4* grad = nullptr);

// Stage 1: classical demosaick + residual network refinement. The recorded
// CFA samples are written back bit-exactly after the refinement.
struct DemosaicStage {
  DemosaicMethod preprocess = DemosaicMethod::gbtf;
  Network net;
  bool trained = false;  // set once weights are deliberately established

  explicit DemosaicStage(const NetworkSpec& spec = NetworkSpec{}) : net(spec) {}
};

// Stage 2: residual denoiser; prediction = x - G(x).
struct DenoiseStage {
  Network net;
  std::string sigma_tag;  // noise level the weights target, e.g. "sigma20"
  bool trained = false;

  explicit DenoiseStage(const NetworkSpec& spec = NetworkSpec{}) : net(spec) {}
};

// Classical preprocess, network residual, then exact sample retention:
// out = (1 - M) .* (base + F(base)) + M .* embed(y).
// Throws std::logic_error when the stage's weights were never established.
RgbImage demosaic_cnn(DemosaicStage& stage, const CfaImage& y);

// Residual denoise: x - G(x). Throws std::logic_error when untrained.
RgbImage denoise_cnn(DenoiseStage& stage, const RgbImage& x);

// Stage 1 followed by stage 2.
RgbImage full_pipeline(DemosaicStage& dm, DenoiseStage& dn, const CfaImage& y);

}  // namespace rawpipe
