// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include "rawpipe/noise.hpp"

#include <stdexcept>

#include "rawpipe/rng.hpp"

namespace rawpipe {

CfaImage add_noise(const CfaImage& y, const NoiseSpec& spec) {
  if (spec.sigma < 0) throw std::invalid_argument("add_noise: sigma must be non-negative");
  if (spec.sigma == 0) return y;
  SeededRng rng(spec.seed);
  Plane out = y.samples;
  for (double& v : out.data) v += spec.sigma * rng.normal();
  return CfaImage(std::move(out), y.pattern);
}

RgbImage add_noise(const RgbImage& x, const NoiseSpec& spec) {
  if (spec.sigma < 0) throw std::invalid_argument("add_noise: sigma must be non-negative");
  if (spec.sigma == 0) return x;
  SeededRng rng(spec.seed);
  RgbImage out = x;
  for (int i = 0; i < x.height(); ++i) {
    for (int j = 0; j < x.width(); ++j) {
      for (int c = 0; c < 3; ++c) {
        out.channel(c).at(i, j) += spec.sigma * rng.normal();
      }
    }
  }
  return out;
}

}  // namespace rawpipe
