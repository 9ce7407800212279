// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <string>
#include <string_view>

#include "rawpipe/image.hpp"

namespace rawpipe {

// The four 2x2 Bayer tilings, named by their top-left cell reading order.
enum class BayerPattern { rggb, grbg, gbrg, bggr };

BayerPattern parse_pattern(std::string_view name);
std::string to_string(BayerPattern p);

// Channel recorded at pixel (i, j): 0=R, 1=G, 2=B. Periodic with period 2.
int channel_at(BayerPattern p, int i, int j);

// Row/column parity (within the 2x2 cell) of the red sample.
void red_phase(BayerPattern p, int& row, int& col);

// A CFA mosaic: one sample per pixel plus the pattern that produced it.
// Dimensions must be even (whole 2x2 cells) and at least 2.
struct CfaImage {
  Plane samples;
  BayerPattern pattern = BayerPattern::rggb;

  CfaImage() = default;
  CfaImage(Plane s, BayerPattern p);

  int height() const { return samples.height; }
  int width() const { return samples.width; }
};

// Per-channel binary masks: m[c](i,j) = 1 iff pixel (i,j) records channel c.
// The three planes partition the image; the inverse mask of a channel is 1-m[c].
struct CfaMask {
  Plane m[3];

  int height() const { return m[0].height; }
  int width() const { return m[0].width; }
};

// Build the mask planes for a pattern. Throws on odd or non-positive sizes.
CfaMask make_mask(BayerPattern p, int h, int w);

// Sample an RGB image through a CFA: samples(i,j) = x[channel_at(i,j)](i,j).
CfaImage mosaic(const RgbImage& x, BayerPattern p);

// Place CFA samples into an RGB image (zeros at non-sampled positions).
RgbImage embed(const CfaImage& y);

// Elementwise m .* x per channel.
RgbImage apply_mask(const RgbImage& x, const CfaMask& m);

// Elementwise m .* a + (1 - m) .* b per channel. Implemented as an exact
// per-pixel select, so values from a and b are passed through bit-exactly.
RgbImage compose(const RgbImage& a, const RgbImage& b, const CfaMask& m);

}  // namespace rawpipe
