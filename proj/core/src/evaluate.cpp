// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include "rawpipe/evaluate.hpp"

#include "rawpipe/parallel.hpp"

namespace rawpipe {
namespace {

bool needs_crop(const RgbImage& x) { return x.height() % 2 != 0 || x.width() % 2 != 0; }

// Drops a trailing row/column as needed to reach even dimensions.
RgbImage crop_even(const RgbImage& x) {
  const int h = x.height() - x.height() % 2;
  const int w = x.width() - x.width() % 2;
  RgbImage out(h, w);
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < h; ++i) {
      const double* src = x.channel(c).row(i);
      double* dst = out.channel(c).row(i);
      for (int j = 0; j < w; ++j) dst[j] = src[j];
    }
  }
  return out;
}

}  // namespace

DatasetEvalResult evaluate_dataset(const std::vector<NamedImage>& images,
                                   const Reconstructor& fn, const EvalOptions& opt) {
  DatasetEvalResult result;
  for (const auto& im : images) {
    if (needs_crop(im.image)) {
      result.warnings.push_back("image " + im.name +
                                " has odd dimensions; cropped one trailing row/column");
    }
  }

  result.report.rows.resize(images.size());
  parallel_for(0, static_cast<int64_t>(images.size()), opt.jobs, [&](int64_t idx) {
    const auto& named = images[static_cast<size_t>(idx)];
    const RgbImage* gt = &named.image;
    RgbImage cropped;
    if (needs_crop(*gt)) {
      cropped = crop_even(*gt);
      gt = &cropped;
    }
    CfaImage y = mosaic(*gt, opt.pattern);
    if (opt.sigma > 0.0) {
      y = add_noise(y, NoiseSpec{opt.sigma, opt.seed + static_cast<uint64_t>(idx)});
    }
    const RgbImage rec = fn(y, static_cast<size_t>(idx));
    const Rgb8Image qgt = quantize(*gt);
    const Rgb8Image qrec = quantize(rec);
    EvalRow& row = result.report.rows[static_cast<size_t>(idx)];
    row.name = named.name;
    row.psnr = psnr(qgt, qrec, opt.protocol.border_crop);
    row.ssim = ssim(qgt, qrec, opt.protocol.border_crop);
  });

  result.report.header = default_report_header(opt.protocol);
  result.report.finalize();
  return result;
}

}  // namespace rawpipe
