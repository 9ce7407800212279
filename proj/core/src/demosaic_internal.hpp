// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
//
// Shared helpers for the demosaickers. Each algorithm is written for the
// pattern with red at (0,0); other phases are handled by mirroring the mosaic
// onto that layout, running the algorithm, and mirroring back. Mirroring moves
// values without arithmetic, so exact retention of samples is preserved.
#pragma once

#include <utility>

#include "rawpipe/bayer.hpp"
#include "rawpipe/image.hpp"

namespace rawpipe::detail {

inline Plane flip_plane(const Plane& p, bool flip_rows, bool flip_cols) {
  if (!flip_rows && !flip_cols) return p;
  Plane out(p.height, p.width);
  for (int i = 0; i < p.height; ++i) {
    const int si = flip_rows ? p.height - 1 - i : i;
    if (!flip_cols) {
      for (int j = 0; j < p.width; ++j) out.at(i, j) = p.at(si, j);
    } else {
      for (int j = 0; j < p.width; ++j) out.at(i, j) = p.at(si, p.width - 1 - j);
    }
  }
  return out;
}

inline RgbImage flip_rgb(const RgbImage& x, bool flip_rows, bool flip_cols) {
  if (!flip_rows && !flip_cols) return x;
  RgbImage out;
  out.r = flip_plane(x.r, flip_rows, flip_cols);
  out.g = flip_plane(x.g, flip_rows, flip_cols);
  out.b = flip_plane(x.b, flip_rows, flip_cols);
  return out;
}

// Runs `algo` (written for red-at-(0,0) layout) on a mosaic of any phase.
template <typename Algo>
RgbImage run_phase_normalized(const CfaImage& y, Algo&& algo) {
  int pr = 0, pc = 0;
  red_phase(y.pattern, pr, pc);
  const bool fr = pr == 1, fc = pc == 1;
  Plane normalized = flip_plane(y.samples, fr, fc);
  RgbImage out = algo(normalized);
  return flip_rgb(out, fr, fc);
}

// In the red-at-(0,0) layout: green sites are where (i+j) is odd.
inline bool is_green_site(int i, int j) { return ((i + j) & 1) != 0; }
inline bool is_red_site(int i, int j) { return (i % 2 == 0) && (j % 2 == 0); }
inline bool is_blue_site(int i, int j) { return (i % 2 == 1) && (j % 2 == 1); }

}  // namespace rawpipe::detail
