// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include "rawpipe/bayer.hpp"

#include <array>

namespace rawpipe {

namespace {

// 2x2 cell layouts in row-major order: {(0,0), (0,1), (1,0), (1,1)}.
constexpr std::array<std::array<int, 4>, 4> kCell = {{
    {0, 1, 1, 2},  // rggb
    {1, 0, 2, 1},  // grbg
    {1, 2, 0, 1},  // gbrg
    {2, 1, 1, 0},  // bggr
}};

void check_even_dims(int h, int w, const char* what) {
  if (h < 2 || w < 2 || h % 2 != 0 || w % 2 != 0) {
    throw std::invalid_argument(std::string(what) +
                                ": dimensions must be even and at least 2x2, got " +
                                std::to_string(h) + "x" + std::to_string(w));
  }
}

}  // namespace

BayerPattern parse_pattern(std::string_view name) {
  std::string s(name);
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (s == "rggb") return BayerPattern::rggb;
  if (s == "grbg") return BayerPattern::grbg;
  if (s == "gbrg") return BayerPattern::gbrg;
  if (s == "bggr") return BayerPattern::bggr;
  throw std::invalid_argument("unknown Bayer pattern: " + std::string(name));
}

std::string to_string(BayerPattern p) {
  switch (p) {
    case BayerPattern::rggb: return "rggb";
    case BayerPattern::grbg: return "grbg";
    case BayerPattern::gbrg: return "gbrg";
    case BayerPattern::bggr: return "bggr";
  }
  throw std::invalid_argument("invalid BayerPattern");
}

int channel_at(BayerPattern p, int i, int j) {
  return kCell[static_cast<int>(p)][(i & 1) * 2 + (j & 1)];
}

void red_phase(BayerPattern p, int& row, int& col) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (kCell[static_cast<int>(p)][i * 2 + j] == 0) {
        row = i;
        col = j;
        return;
      }
    }
  }
}

CfaImage::CfaImage(Plane s, BayerPattern p) : samples(std::move(s)), pattern(p) {
  check_even_dims(samples.height, samples.width, "CfaImage");
}

CfaMask make_mask(BayerPattern p, int h, int w) {
  check_even_dims(h, w, "make_mask");
  CfaMask mask;
  for (int c = 0; c < 3; ++c) mask.m[c] = Plane(h, w, 0.0);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      mask.m[channel_at(p, i, j)].at(i, j) = 1.0;
    }
  }
  return mask;
}

CfaImage mosaic(const RgbImage& x, BayerPattern p) {
  check_even_dims(x.height(), x.width(), "mosaic");
  Plane s(x.height(), x.width());
  for (int i = 0; i < x.height(); ++i) {
    for (int j = 0; j < x.width(); ++j) {
      s.at(i, j) = x.channel(channel_at(p, i, j)).at(i, j);
    }
  }
  return CfaImage(std::move(s), p);
}

RgbImage embed(const CfaImage& y) {
  RgbImage out(y.height(), y.width(), 0.0);
  for (int i = 0; i < y.height(); ++i) {
    for (int j = 0; j < y.width(); ++j) {
      out.channel(channel_at(y.pattern, i, j)).at(i, j) = y.samples.at(i, j);
    }
  }
  return out;
}

RgbImage apply_mask(const RgbImage& x, const CfaMask& m) {
  if (x.height() != m.height() || x.width() != m.width()) {
    throw std::invalid_argument("apply_mask: shape mismatch");
  }
  RgbImage out(x.height(), x.width());
  for (int c = 0; c < 3; ++c) {
    const Plane& xp = x.channel(c);
    const Plane& mp = m.m[c];
    Plane& op = out.channel(c);
    for (size_t k = 0; k < xp.data.size(); ++k) op.data[k] = mp.data[k] != 0.0 ? xp.data[k] : 0.0;
  }
  return out;
}

RgbImage compose(const RgbImage& a, const RgbImage& b, const CfaMask& m) {
  if (!a.same_shape(b) || a.height() != m.height() || a.width() != m.width()) {
    throw std::invalid_argument("compose: shape mismatch");
  }
  RgbImage out(a.height(), a.width());
  for (int c = 0; c < 3; ++c) {
    const Plane& ap = a.channel(c);
    const Plane& bp = b.channel(c);
    const Plane& mp = m.m[c];
    Plane& op = out.channel(c);
    for (size_t k = 0; k < ap.data.size(); ++k) {
      op.data[k] = mp.data[k] != 0.0 ? ap.data[k] : bp.data[k];
    }
  }
  return out;
}

}  // namespace rawpipe
