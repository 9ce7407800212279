// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include <array>
#include <cmath>

#include "rawpipe/demosaic.hpp"
#include "demosaic_internal.hpp"

namespace rawpipe {

namespace {

using detail::is_blue_site;
using detail::is_green_site;
using detail::is_red_site;

constexpr double kWeightEps = 1e-10;

// 7x7 stencil (divided by 32) applied to the estimated green-minus-chroma
// plane when transferring a chroma value across the opposite chroma's sites.
constexpr int kCrossStencil[7][7] = {
    {0, 0, -1, 0, -1, 0, 0},
    {0, 0, 0, 0, 0, 0, 0},
    {-1, 0, 10, 0, 10, 0, -1},
    {0, 0, 0, 0, 0, 0, 0},
    {-1, 0, 10, 0, 10, 0, -1},
    {0, 0, 0, 0, 0, 0, 0},
    {0, 0, -1, 0, -1, 0, 0},
};

inline double cl(const Plane& p, int i, int j) { return p.at_clamped(i, j); }

// Parity-preserving clamp: replicates each channel's sample grid at the
// borders so stencil taps keep hitting the intended channel.
inline int pclamp(int t, int n) {
  while (t < 0) t += 2;
  while (t >= n) t -= 2;
  return t;
}

inline double pc(const Plane& p, int i, int j) {
  return p.at(pclamp(i, p.height), pclamp(j, p.width));
}

RgbImage gbtf_red_at_00(const Plane& cfa) {
  const int h = cfa.height, w = cfa.width;

  // Five-tap directional prefilters estimate the complementary channel along
  // rows (H) and columns (V): weights (-1, 2, 2, 2, -1)/4. Border taps use the
  // parity clamp; a plain clamp would fold same-channel samples onto the
  // complementary positions and bias the estimate.
  Plane H(h, w), V(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      H.at(i, j) = 0.25 * (-pc(cfa, i, j - 2) + 2.0 * pc(cfa, i, j - 1) + 2.0 * cfa.at(i, j) +
                           2.0 * pc(cfa, i, j + 1) - pc(cfa, i, j + 2));
      V.at(i, j) = 0.25 * (-pc(cfa, i - 2, j) + 2.0 * pc(cfa, i - 1, j) + 2.0 * cfa.at(i, j) +
                           2.0 * pc(cfa, i + 1, j) - pc(cfa, i + 2, j));
    }
  }

  // Dense green-minus-chroma difference fields, oriented so the value is
  // always (green - chroma) whichever of the two is the actual sample.
  Plane dH(h, w), dV(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const double s = cfa.at(i, j);
      if (is_green_site(i, j)) {
        dH.at(i, j) = s - H.at(i, j);
        dV.at(i, j) = s - V.at(i, j);
      } else {
        dH.at(i, j) = H.at(i, j) - s;
        dV.at(i, j) = V.at(i, j) - s;
      }
    }
  }

  // Central-difference gradient magnitudes of the difference fields.
  Plane DH(h, w), DV(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      DH.at(i, j) = std::abs(cl(dH, i, j + 1) - cl(dH, i, j - 1));
      DV.at(i, j) = std::abs(cl(dV, i + 1, j) - cl(dV, i - 1, j));
    }
  }

  // Fused difference estimate: four directional averages of the difference
  // fields combined with inverse-squared directional gradient energies. Each
  // directional window is 5x5, shifted two pixels along its direction.
  Plane delta(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      double sn = 0, ss = 0, swt = 0, se = 0;
      for (int di = -2; di <= 2; ++di) {
        for (int dj = -4; dj <= 0; ++dj) {
          sn += cl(DV, i + dj, j + di);  // rows i-4..i, cols j-2..j+2
          ss += cl(DV, i - dj, j + di);  // rows i..i+4
          swt += cl(DH, i + di, j + dj);  // rows i-2..i+2, cols j-4..j
          se += cl(DH, i + di, j - dj);  // cols j..j+4
        }
      }
      const double wn = 1.0 / (sn * sn + kWeightEps);
      const double ws = 1.0 / (ss * ss + kWeightEps);
      const double ww = 1.0 / (swt * swt + kWeightEps);
      const double we = 1.0 / (se * se + kWeightEps);

      double an = 0, as = 0, aw = 0, ae = 0;
      for (int t = 0; t < 5; ++t) {
        an += cl(dV, i - t, j);
        as += cl(dV, i + t, j);
        aw += cl(dH, i, j - t);
        ae += cl(dH, i, j + t);
      }
      an *= 0.2;
      as *= 0.2;
      aw *= 0.2;
      ae *= 0.2;

      delta.at(i, j) =
          (wn * an + ws * as + ww * aw + we * ae) / (wn + ws + ww + we);
    }
  }

  // Green: sample + fused difference at chroma sites.
  RgbImage out(h, w);
  Plane& G = out.g;
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      G.at(i, j) = is_green_site(i, j) ? cfa.at(i, j) : cfa.at(i, j) + delta.at(i, j);
    }
  }

  // Difference estimates split per chroma (zero elsewhere), consumed by the
  // cross-chroma stencil below.
  Plane grd(h, w, 0.0), gbd(h, w, 0.0);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      if (is_red_site(i, j)) grd.at(i, j) = delta.at(i, j);
      else if (is_blue_site(i, j)) gbd.at(i, j) = delta.at(i, j);
    }
  }

  // The stencil's taps all target the opposite chroma's sample lattice, so
  // border reads must stay on that lattice (parity clamp).
  auto cross = [&](const Plane& d, int i, int j) {
    double acc = 0;
    for (int di = -3; di <= 3; ++di) {
      for (int dj = -3; dj <= 3; ++dj) {
        const int coeff = kCrossStencil[di + 3][dj + 3];
        if (coeff != 0) acc += coeff * pc(d, i + di, j + dj);
      }
    }
    return acc / 32.0;
  };

  // Red and blue: samples kept, the opposite chroma site filled through the
  // stencil, green sites filled by 4-neighbor difference averaging last.
  Plane& R = out.r;
  Plane& B = out.b;
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      if (is_red_site(i, j)) {
        R.at(i, j) = cfa.at(i, j);
        B.at(i, j) = G.at(i, j) - cross(gbd, i, j);
      } else if (is_blue_site(i, j)) {
        B.at(i, j) = cfa.at(i, j);
        R.at(i, j) = G.at(i, j) - cross(grd, i, j);
      }
    }
  }
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      if (!is_green_site(i, j)) continue;
      // In-bounds 4-neighbors of a green site are always chroma sites and thus
      // already filled; clamping instead would fold the (green, unfilled)
      // center back in at image borders.
      double dr = 0, db = 0;
      int cnt = 0;
      const int ni[4] = {i - 1, i + 1, i, i};
      const int nj[4] = {j, j, j - 1, j + 1};
      for (int k = 0; k < 4; ++k) {
        const int ci = ni[k], cj = nj[k];
        if (ci < 0 || ci >= h || cj < 0 || cj >= w) continue;
        dr += G.at(ci, cj) - R.at(ci, cj);
        db += G.at(ci, cj) - B.at(ci, cj);
        ++cnt;
      }
      R.at(i, j) = G.at(i, j) - dr / cnt;
      B.at(i, j) = G.at(i, j) - db / cnt;
    }
  }
  return out;
}

}  // namespace

RgbImage demosaic_gbtf(const CfaImage& y) {
  return detail::run_phase_normalized(y, gbtf_red_at_00);
}

}  // namespace rawpipe
