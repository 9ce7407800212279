// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rawpipe/bayer.hpp"
#include "rawpipe/dataset.hpp"
#include "rawpipe/metrics.hpp"
#include "rawpipe/noise.hpp"

namespace rawpipe {

// Rebuilds a full-color image from a CFA mosaic. The dataset index is passed
// through so stateless per-image reconstructors can be closed over shared,
// read-only state and run concurrently.
using Reconstructor = std::function<RgbImage(const CfaImage& y, size_t index)>;

struct EvalOptions {
  BayerPattern pattern = BayerPattern::rggb;
  double sigma = 0.0;     // CFA noise level; 0 disables injection
  uint64_t seed = 1;      // base seed; image i draws with seed + i
  EvalProtocol protocol;  // quantization + border-crop rules
  int jobs = 1;
};

// Ground-truth driven sweep: every image is mosaicked, optionally degraded with
// noise, reconstructed by `fn`, quantized, and scored against the quantized
// ground truth. Images with odd dimensions are cropped by one trailing row or
// column first (with a warning). Rows keep the dataset order regardless of
// thread scheduling.
struct DatasetEvalResult {
  EvalReport report;
  std::vector<std::string> warnings;
};

DatasetEvalResult evaluate_dataset(const std::vector<NamedImage>& images,
                                   const Reconstructor& fn, const EvalOptions& opt);

}  // namespace rawpipe
