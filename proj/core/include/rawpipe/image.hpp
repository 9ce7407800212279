// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rawpipe {

// Single-channel float64 raster. Values are nominally on the 0-255 scale but
// are not clamped; intermediate results may exceed the nominal range.
struct Plane {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  Plane() = default;
  Plane(int h, int w, double fill = 0.0)
      : height(h), width(w), data(static_cast<size_t>(h) * w, fill) {
    if (h <= 0 || w <= 0) throw std::invalid_argument("Plane: non-positive dimensions");
  }

  double& at(int i, int j) { return data[static_cast<size_t>(i) * width + j]; }
  double at(int i, int j) const { return data[static_cast<size_t>(i) * width + j]; }

  // Replicate-padded access: indices are clamped to the valid range.
  double at_clamped(int i, int j) const {
    i = std::clamp(i, 0, height - 1);
    j = std::clamp(j, 0, width - 1);
    return at(i, j);
  }

  const double* row(int i) const { return data.data() + static_cast<size_t>(i) * width; }
  double* row(int i) { return data.data() + static_cast<size_t>(i) * width; }

  bool same_shape(const Plane& o) const { return height == o.height && width == o.width; }
};

// Three-plane RGB image in float64, planes indexed 0=R, 1=G, 2=B.
struct RgbImage {
  Plane r, g, b;

  RgbImage() = default;
  RgbImage(int h, int w, double fill = 0.0) : r(h, w, fill), g(h, w, fill), b(h, w, fill) {}

  int height() const { return r.height; }
  int width() const { return r.width; }

  Plane& channel(int c) {
    switch (c) {
      case 0: return r;
      case 1: return g;
      case 2: return b;
    }
    throw std::out_of_range("RgbImage::channel");
  }
  const Plane& channel(int c) const {
    switch (c) {
      case 0: return r;
      case 1: return g;
      case 2: return b;
    }
    throw std::out_of_range("RgbImage::channel");
  }

  bool same_shape(const RgbImage& o) const { return r.same_shape(o.r); }
};

// Quantized 8-bit RGB image, planar layout (channel-major), row-major planes.
struct Rgb8Image {
  int height = 0;
  int width = 0;
  std::vector<uint8_t> data;  // size 3*height*width, planes R,G,B

  Rgb8Image() = default;
  Rgb8Image(int h, int w) : height(h), width(w), data(static_cast<size_t>(3) * h * w, 0) {}

  uint8_t& at(int c, int i, int j) {
    return data[(static_cast<size_t>(c) * height + i) * width + j];
  }
  uint8_t at(int c, int i, int j) const {
    return data[(static_cast<size_t>(c) * height + i) * width + j];
  }
  bool same_shape(const Rgb8Image& o) const { return height == o.height && width == o.width; }
};

}  // namespace rawpipe
