// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <string>
#include <string_view>

#include "rawpipe/bayer.hpp"
#include "rawpipe/image.hpp"

namespace rawpipe {

enum class DemosaicMethod { bilinear, ha, gbtf };

DemosaicMethod parse_demosaic_method(std::string_view name);
std::string to_string(DemosaicMethod m);

// Nearest same-channel neighbor averaging (2 or 4 taps in the interior,
// replicate-padded at borders). Sampled positions retained exactly.
RgbImage demosaic_bilinear(const CfaImage& y);

// Directional green interpolation with second-order chroma correction,
// direction chosen by the smaller Laplacian-augmented gradient (candidates
// averaged on ties); red/blue filled in the color-difference domain guided by
// the completed green. Sampled positions retained exactly.
RgbImage demosaic_ha(const CfaImage& y);

// Gradient-weighted fusion of directional color-difference estimates:
// horizontal/vertical difference fields from five-tap prefilters, inverse
// squared gradient-sum weights over directional 5x5 windows, green restored
// from the fused difference, red/blue via a fixed 7x7 stencil on the estimated
// difference plane and 4-neighbor difference averaging at green sites.
// Sampled positions retained exactly; output is not clamped.
RgbImage demosaic_gbtf(const CfaImage& y);

RgbImage demosaic(const CfaImage& y, DemosaicMethod m);

}  // namespace rawpipe
