// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <cstdint>

#include "rawpipe/bayer.hpp"
#include "rawpipe/image.hpp"

namespace rawpipe {

// Additive white Gaussian noise on the 0-255 scale.
struct NoiseSpec {
  double sigma = 0.0;
  uint64_t seed = 0;
};

// Adds i.i.d. N(0, sigma^2) to every sample, drawn in row-major pixel order
// from a generator seeded with spec.seed. No clipping is applied; values may
// leave [0, 255]. Identical (seed, sigma, shape) gives bit-identical output.
CfaImage add_noise(const CfaImage& y, const NoiseSpec& spec);

// Same contract for full-color images (used by synthetic test corpora);
// channels are visited R,G,B within each pixel, row-major.
RgbImage add_noise(const RgbImage& x, const NoiseSpec& spec);

}  // namespace rawpipe
