// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <limits>
#include <string>
#include <vector>

#include "rawpipe/image.hpp"

namespace rawpipe {

// Evaluation protocol: quantize to uint8 (round half away from zero, clamp to
// [0,255]), discard a 10-pixel border, then compare. PSNR uses MSE pooled over
// all three channels; SSIM is the per-channel index averaged over R, G, B.
struct EvalProtocol {
  int border_crop = 10;
};

// Round half away from zero, clamp to [0,255]. Non-finite values map to 0.
uint8_t quantize_value(double v);
Rgb8Image quantize(const RgbImage& x);

// 10*log10(255^2 / MSE) with MSE pooled over the cropped H x W x 3 volume.
// Identical inputs give +infinity.
double psnr(const Rgb8Image& ref, const Rgb8Image& test, int crop);

// Mean structural similarity: 11x11 Gaussian window (sigma 1.5), K1=0.01,
// K2=0.03, dynamic range 255, valid-window filtering, averaged over the three
// channels. Requires at least 11 pixels in each dimension after cropping.
double ssim(const Rgb8Image& ref, const Rgb8Image& test, int crop);

inline constexpr double kPsnrInfinite = std::numeric_limits<double>::infinity();

// One evaluated image and the dataset aggregate.
struct EvalRow {
  std::string name;
  double psnr = 0.0;
  double ssim = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  double mean_psnr = 0.0;
  double mean_ssim = 0.0;
  std::string header;  // protocol description recorded with every report

  void finalize();  // recompute means from rows
  std::string to_csv() const;
  std::string to_table() const;  // aligned text, "PSNR/SSIM" layout
};

std::string default_report_header(const EvalProtocol& p);

}  // namespace rawpipe
