// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include <cmath>

#include "rawpipe/demosaic.hpp"
#include "demosaic_internal.hpp"

namespace rawpipe {

namespace {

using detail::is_green_site;
using detail::is_red_site;

inline int pclamp(int t, int n) {
  while (t < 0) t += 2;
  while (t >= n) t -= 2;
  return t;
}

// Parity-preserving clamped read (replicates each channel's sample grid).
inline double pc(const Plane& p, int i, int j) {
  return p.at(pclamp(i, p.height), pclamp(j, p.width));
}

RgbImage ha_red_at_00(const Plane& cfa) {
  const int h = cfa.height, w = cfa.width;
  RgbImage out(h, w);
  Plane& G = out.g;

  // Pass 1: green everywhere. At red/blue sites pick the direction with the
  // smaller gradient + second-difference magnitude; average the candidates on
  // ties. The second-order term corrects for the chroma ramp under the green.
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      if (is_green_site(i, j)) {
        G.at(i, j) = cfa.at(i, j);
        continue;
      }
      const double c = cfa.at(i, j);
      const double gw = pc(cfa, i, j - 1), ge = pc(cfa, i, j + 1);
      const double gn = pc(cfa, i - 1, j), gs = pc(cfa, i + 1, j);
      const double cww = pc(cfa, i, j - 2), cee = pc(cfa, i, j + 2);
      const double cnn = pc(cfa, i - 2, j), css = pc(cfa, i + 2, j);
      const double cand_h = 0.5 * (gw + ge) + 0.25 * (2.0 * c - cww - cee);
      const double cand_v = 0.5 * (gn + gs) + 0.25 * (2.0 * c - cnn - css);
      const double grad_h = std::abs(gw - ge) + std::abs(2.0 * c - cww - cee);
      const double grad_v = std::abs(gn - gs) + std::abs(2.0 * c - cnn - css);
      if (grad_h < grad_v) {
        G.at(i, j) = cand_h;
      } else if (grad_v < grad_h) {
        G.at(i, j) = cand_v;
      } else {
        G.at(i, j) = 0.5 * (cand_h + cand_v);
      }
    }
  }

  // Pass 2: red and blue in the color-difference domain against completed
  // green. Chroma neighbors are CFA samples; their green comes from pass 1.
  auto diff = [&](int i, int j) {
    const int ci = pclamp(i, h), cj = pclamp(j, w);
    return cfa.at(ci, cj) - G.at(ci, cj);
  };
  auto diag_mean = [&](int i, int j) {
    return 0.25 * (diff(i - 1, j - 1) + diff(i - 1, j + 1) + diff(i + 1, j - 1) +
                   diff(i + 1, j + 1));
  };
  auto horiz_mean = [&](int i, int j) { return 0.5 * (diff(i, j - 1) + diff(i, j + 1)); };
  auto vert_mean = [&](int i, int j) { return 0.5 * (diff(i - 1, j) + diff(i + 1, j)); };

  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const double g = G.at(i, j);
      if (is_red_site(i, j)) {
        out.r.at(i, j) = cfa.at(i, j);
        out.b.at(i, j) = g + diag_mean(i, j);
      } else if (!is_green_site(i, j)) {  // blue site
        out.b.at(i, j) = cfa.at(i, j);
        out.r.at(i, j) = g + diag_mean(i, j);
      } else if (i % 2 == 0) {  // green on a red row
        out.r.at(i, j) = g + horiz_mean(i, j);
        out.b.at(i, j) = g + vert_mean(i, j);
      } else {  // green on a blue row
        out.r.at(i, j) = g + vert_mean(i, j);
        out.b.at(i, j) = g + horiz_mean(i, j);
      }
    }
  }
  return out;
}

}  // namespace

RgbImage demosaic_ha(const CfaImage& y) {
  return detail::run_phase_normalized(y, ha_red_at_00);
}

}  // namespace rawpipe
