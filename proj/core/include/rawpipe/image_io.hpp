// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <optional>
#include <string>

#include "rawpipe/bayer.hpp"
#include "rawpipe/image.hpp"

namespace rawpipe {

// Decodes a PNG (8- or 16-bit; gray, palette, RGB, or RGBA) or TIFF image to
// 0-255 float64 RGB. 16-bit samples are scaled by 255/65535; grayscale is
// replicated to three channels; alpha is dropped. Throws std::runtime_error
// on unreadable or unsupported files.
RgbImage read_image(const std::string& path);

// Writes quantized 8-bit RGB as a PNG.
void write_png8(const std::string& path, const Rgb8Image& img);

// CFA container: a single-channel 16-bit PNG storing round(sample * 256)
// clamped to [0, 65535], plus a sidecar text file "<path>.pattern" holding one
// line that names the Bayer pattern (e.g. "rggb"). Values below zero (possible
// after noise injection) clamp to zero in the container.
void write_cfa_png16(const std::string& path, const CfaImage& y);

// Reads the container written by write_cfa_png16 (sample = stored / 256).
// The pattern comes from the sidecar; `fallback` is used when the sidecar is
// missing, and a missing sidecar without fallback is an error.
CfaImage read_cfa_png16(const std::string& path,
                        std::optional<BayerPattern> fallback = std::nullopt);

// True when `path` names a CFA container, i.e. its pattern sidecar exists.
bool is_cfa_file(const std::string& path);

}  // namespace rawpipe
