// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include "rawpipe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace rawpipe {

uint8_t quantize_value(double v) {
  if (!std::isfinite(v)) return 0;
  double r = std::floor(std::abs(v) + 0.5);  // round half away from zero
  if (v < 0) r = -r;
  if (r < 0.0) return 0;
  if (r > 255.0) return 255;
  return static_cast<uint8_t>(r);
}

Rgb8Image quantize(const RgbImage& x) {
  Rgb8Image out(x.height(), x.width());
  for (int c = 0; c < 3; ++c) {
    const Plane& p = x.channel(c);
    for (int i = 0; i < p.height; ++i) {
      for (int j = 0; j < p.width; ++j) {
        out.at(c, i, j) = quantize_value(p.at(i, j));
      }
    }
  }
  return out;
}

namespace {

void check_crop(const Rgb8Image& a, const Rgb8Image& b, int crop) {
  if (!a.same_shape(b)) throw std::invalid_argument("metric: shape mismatch");
  if (crop < 0 || 2 * crop >= std::min(a.height, a.width)) {
    throw std::invalid_argument("metric: crop must be less than half of the smaller dimension");
  }
}

}  // namespace

double psnr(const Rgb8Image& ref, const Rgb8Image& test, int crop) {
  check_crop(ref, test, crop);
  const int h = ref.height, w = ref.width;
  double se = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (int i = crop; i < h - crop; ++i) {
      for (int j = crop; j < w - crop; ++j) {
        const double d = static_cast<double>(ref.at(c, i, j)) - static_cast<double>(test.at(c, i, j));
        se += d * d;
      }
    }
  }
  const double n = 3.0 * (h - 2 * crop) * (w - 2 * crop);
  const double mse = se / n;
  if (mse == 0.0) return kPsnrInfinite;
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

namespace {

constexpr int kWin = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

struct GaussianWindow {
  double g[kWin];
  GaussianWindow() {
    double sum = 0.0;
    for (int k = 0; k < kWin; ++k) {
      const double x = k - (kWin - 1) / 2.0;
      g[k] = std::exp(-(x * x) / (2.0 * kSigma * kSigma));
      sum += g[k];
    }
    for (int k = 0; k < kWin; ++k) g[k] /= sum;
  }
};

// Valid-mode separable Gaussian blur: input h x w, output (h-10) x (w-10).
void blur_valid(const std::vector<double>& in, int h, int w, std::vector<double>& tmp,
                std::vector<double>& out) {
  static const GaussianWindow win;
  const int wo = w - (kWin - 1);
  const int ho = h - (kWin - 1);
  tmp.assign(static_cast<size_t>(h) * wo, 0.0);
  for (int i = 0; i < h; ++i) {
    const double* src = in.data() + static_cast<size_t>(i) * w;
    double* dst = tmp.data() + static_cast<size_t>(i) * wo;
    for (int j = 0; j < wo; ++j) {
      double acc = 0.0;
      for (int k = 0; k < kWin; ++k) acc += win.g[k] * src[j + k];
      dst[j] = acc;
    }
  }
  out.assign(static_cast<size_t>(ho) * wo, 0.0);
  for (int i = 0; i < ho; ++i) {
    double* dst = out.data() + static_cast<size_t>(i) * wo;
    for (int k = 0; k < kWin; ++k) {
      const double* src = tmp.data() + static_cast<size_t>(i + k) * wo;
      const double wk = win.g[k];
      for (int j = 0; j < wo; ++j) dst[j] += wk * src[j];
    }
  }
}

double ssim_channel(const std::vector<double>& a, const std::vector<double>& b, int h, int w) {
  const size_t n = static_cast<size_t>(h) * w;
  std::vector<double> aa(n), bb(n), ab(n);
  for (size_t k = 0; k < n; ++k) {
    aa[k] = a[k] * a[k];
    bb[k] = b[k] * b[k];
    ab[k] = a[k] * b[k];
  }
  std::vector<double> tmp, mu1, mu2, s11, s22, s12;
  blur_valid(a, h, w, tmp, mu1);
  blur_valid(b, h, w, tmp, mu2);
  blur_valid(aa, h, w, tmp, s11);
  blur_valid(bb, h, w, tmp, s22);
  blur_valid(ab, h, w, tmp, s12);
  double total = 0.0;
  for (size_t k = 0; k < mu1.size(); ++k) {
    const double m1 = mu1[k], m2 = mu2[k];
    const double m1s = m1 * m1, m2s = m2 * m2, m12 = m1 * m2;
    const double v1 = s11[k] - m1s;
    const double v2 = s22[k] - m2s;
    const double cov = s12[k] - m12;
    total += ((2.0 * m12 + kC1) * (2.0 * cov + kC2)) /
             ((m1s + m2s + kC1) * (v1 + v2 + kC2));
  }
  return total / static_cast<double>(mu1.size());
}

}  // namespace

double ssim(const Rgb8Image& ref, const Rgb8Image& test, int crop) {
  check_crop(ref, test, crop);
  const int h = ref.height - 2 * crop;
  const int w = ref.width - 2 * crop;
  if (h < kWin || w < kWin) {
    throw std::invalid_argument("ssim: cropped image smaller than the filter window");
  }
  std::vector<double> a(static_cast<size_t>(h) * w), b(a.size());
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < h; ++i) {
      for (int j = 0; j < w; ++j) {
        a[static_cast<size_t>(i) * w + j] = ref.at(c, i + crop, j + crop);
        b[static_cast<size_t>(i) * w + j] = test.at(c, i + crop, j + crop);
      }
    }
    acc += ssim_channel(a, b, h, w);
  }
  return acc / 3.0;
}

void EvalReport::finalize() {
  double sp = 0.0, ss = 0.0;
  for (const auto& r : rows) {
    sp += r.psnr;
    ss += r.ssim;
  }
  const double n = rows.empty() ? 1.0 : static_cast<double>(rows.size());
  mean_psnr = sp / n;
  mean_ssim = ss / n;
}

namespace {

std::string fmt_psnr(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string fmt_ssim(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string EvalReport::to_csv() const {
  std::ostringstream os;
  os << "# " << header << "\n";
  os << "name,psnr_db,ssim\n";
  for (const auto& r : rows) os << r.name << ',' << fmt_psnr(r.psnr) << ',' << fmt_ssim(r.ssim) << "\n";
  os << "mean," << fmt_psnr(mean_psnr) << ',' << fmt_ssim(mean_ssim) << "\n";
  return os.str();
}

std::string EvalReport::to_table() const {
  size_t name_w = 4;
  for (const auto& r : rows) name_w = std::max(name_w, r.name.size());
  std::ostringstream os;
  os << "# " << header << "\n";
  os << std::string(name_w, ' ') << "  PSNR/SSIM\n";
  auto line = [&](const std::string& name, double p, double s) {
    os << name << std::string(name_w - name.size(), ' ') << "  " << fmt_psnr(p) << '/'
       << fmt_ssim(s) << "\n";
  };
  for (const auto& r : rows) line(r.name, r.psnr, r.ssim);
  line("mean", mean_psnr, mean_ssim);
  return os.str();
}

std::string default_report_header(const EvalProtocol& p) {
  std::ostringstream os;
  os << "protocol: quantize=uint8(round-half-away,clamp 0..255) border_crop=" << p.border_crop
     << " psnr=color(pooled-mse) ssim=11x11 gaussian sigma=1.5 K1=0.01 K2=0.03 L=255, rgb-average";
  return os.str();
}

}  // namespace rawpipe
