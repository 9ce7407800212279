// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include "rawpipe/pipeline.hpp"

#include <stdexcept>

namespace rawpipe {

Tensor4 to_tensor(const RgbImage& x) {
  Tensor4 t(1, 3, x.height(), x.width());
  for (int c = 0; c < 3; ++c) {
    const Plane& p = x.channel(c);
    double* dst = t.plane(0, c);
    for (size_t k = 0; k < p.data.size(); ++k) dst[k] = p.data[k];
  }
  return t;
}

Tensor4 stack_to_tensor(const std::vector<RgbImage>& xs) {
  if (xs.empty()) throw std::invalid_argument("stack_to_tensor: empty batch");
  Tensor4 t(static_cast<int>(xs.size()), 3, xs[0].height(), xs[0].width());
  for (size_t n = 0; n < xs.size(); ++n) {
    if (xs[n].height() != xs[0].height() || xs[n].width() != xs[0].width()) {
      throw std::invalid_argument("stack_to_tensor: mixed shapes in batch");
    }
    for (int c = 0; c < 3; ++c) {
      const Plane& p = xs[n].channel(c);
      double* dst = t.plane(static_cast<int>(n), c);
      for (size_t k = 0; k < p.data.size(); ++k) dst[k] = p.data[k];
    }
  }
  return t;
}

RgbImage to_image(const Tensor4& t, int n) {
  if (t.c != 3) throw std::invalid_argument("to_image: tensor must have 3 channels");
  if (n < 0 || n >= t.n) throw std::invalid_argument("to_image: batch index out of range");
  RgbImage x(t.h, t.w);
  for (int c = 0; c < 3; ++c) {
    Plane& p = x.channel(c);
    const double* src = t.plane(n, c);
    for (size_t k = 0; k < p.data.size(); ++k) p.data[k] = src[k];
  }
  return x;
}

double half_mse_loss(const Tensor4& pred, const Tensor4& target, Tensor4* grad) {
  if (!pred.same_shape(target)) throw std::invalid_argument("half_mse_loss: shape mismatch");
  const double inv_n = 1.0 / static_cast<double>(pred.n);
  if (grad != nullptr && !grad->same_shape(pred)) *grad = Tensor4(pred.n, pred.c, pred.h, pred.w);
  double acc = 0.0;
  for (size_t k = 0; k < pred.size(); ++k) {
    const double d = pred.v[k] - target.v[k];
    acc += d * d;
    if (grad != nullptr) grad->v[k] = d * inv_n;
  }
  return 0.5 * acc * inv_n;
}

RgbImage demosaic_cnn(DemosaicStage& stage, const CfaImage& y) {
  if (!stage.trained) {
    throw std::logic_error("demosaic_cnn: stage has no established weights; "
                           "load a checkpoint or initialize explicitly");
  }
  RgbImage base = demosaic(y, stage.preprocess);
  Tensor4 x = to_tensor(base);
  Tensor4 r = stage.net.forward(x, NnMode::eval);
  for (size_t k = 0; k < x.size(); ++k) r.v[k] += x.v[k];
  const RgbImage refined = to_image(r);
  const CfaMask mask = make_mask(y.pattern, y.height(), y.width());
  return compose(embed(y), refined, mask);
}

RgbImage denoise_cnn(DenoiseStage& stage, const RgbImage& x) {
  if (!stage.trained) {
    throw std::logic_error("denoise_cnn: stage has no established weights; "
                           "load a checkpoint or initialize explicitly");
  }
  Tensor4 t = to_tensor(x);
  Tensor4 r = stage.net.forward(t, NnMode::eval);
  for (size_t k = 0; k < t.size(); ++k) r.v[k] = t.v[k] - r.v[k];
  return to_image(r);
}

RgbImage full_pipeline(DemosaicStage& dm, DenoiseStage& dn, const CfaImage& y) {
  return denoise_cnn(dn, demosaic_cnn(dm, y));
}

}  // namespace rawpipe
