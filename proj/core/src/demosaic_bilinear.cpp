// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include <cctype>

#include "rawpipe/demosaic.hpp"
#include "demosaic_internal.hpp"

namespace rawpipe {

namespace {

using detail::is_green_site;
using detail::is_red_site;

// Clamp an index into [0, n) while preserving its parity, i.e. replicate the
// sample grid of one channel at the borders. Stencil reach here is at most 2.
inline int pclamp(int t, int n) {
  while (t < 0) t += 2;
  while (t >= n) t -= 2;
  return t;
}

inline double avg2(const Plane& p, int i0, int j0, int i1, int j1) {
  const int h = p.height, w = p.width;
  return 0.5 * (p.at(pclamp(i0, h), pclamp(j0, w)) + p.at(pclamp(i1, h), pclamp(j1, w)));
}

inline double avg4_cross(const Plane& p, int i, int j) {
  const int h = p.height, w = p.width;
  return 0.25 * (p.at(pclamp(i - 1, h), j) + p.at(pclamp(i + 1, h), j) +
                 p.at(i, pclamp(j - 1, w)) + p.at(i, pclamp(j + 1, w)));
}

inline double avg4_diag(const Plane& p, int i, int j) {
  const int h = p.height, w = p.width;
  const int in = pclamp(i - 1, h), is = pclamp(i + 1, h);
  const int jw = pclamp(j - 1, w), je = pclamp(j + 1, w);
  return 0.25 * (p.at(in, jw) + p.at(in, je) + p.at(is, jw) + p.at(is, je));
}

RgbImage bilinear_red_at_00(const Plane& cfa) {
  const int h = cfa.height, w = cfa.width;
  RgbImage out(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const double s = cfa.at(i, j);
      if (is_red_site(i, j)) {
        out.r.at(i, j) = s;
        out.g.at(i, j) = avg4_cross(cfa, i, j);
        out.b.at(i, j) = avg4_diag(cfa, i, j);
      } else if (is_green_site(i, j)) {
        out.g.at(i, j) = s;
        if (i % 2 == 0) {  // green on a red row: red left/right, blue above/below
          out.r.at(i, j) = avg2(cfa, i, j - 1, i, j + 1);
          out.b.at(i, j) = avg2(cfa, i - 1, j, i + 1, j);
        } else {  // green on a blue row
          out.r.at(i, j) = avg2(cfa, i - 1, j, i + 1, j);
          out.b.at(i, j) = avg2(cfa, i, j - 1, i, j + 1);
        }
      } else {  // blue site
        out.b.at(i, j) = s;
        out.g.at(i, j) = avg4_cross(cfa, i, j);
        out.r.at(i, j) = avg4_diag(cfa, i, j);
      }
    }
  }
  return out;
}

}  // namespace

RgbImage demosaic_bilinear(const CfaImage& y) {
  return detail::run_phase_normalized(y, bilinear_red_at_00);
}

DemosaicMethod parse_demosaic_method(std::string_view name) {
  std::string s(name);
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (s == "bilinear") return DemosaicMethod::bilinear;
  if (s == "ha") return DemosaicMethod::ha;
  if (s == "gbtf") return DemosaicMethod::gbtf;
  throw std::invalid_argument("unknown demosaic method: " + std::string(name));
}

std::string to_string(DemosaicMethod m) {
  switch (m) {
    case DemosaicMethod::bilinear: return "bilinear";
    case DemosaicMethod::ha: return "ha";
    case DemosaicMethod::gbtf: return "gbtf";
  }
  throw std::invalid_argument("invalid DemosaicMethod");
}

RgbImage demosaic(const CfaImage& y, DemosaicMethod m) {
  switch (m) {
    case DemosaicMethod::bilinear: return demosaic_bilinear(y);
    case DemosaicMethod::ha: return demosaic_ha(y);
    case DemosaicMethod::gbtf: return demosaic_gbtf(y);
  }
  throw std::invalid_argument("invalid DemosaicMethod");
}

}  // namespace rawpipe
