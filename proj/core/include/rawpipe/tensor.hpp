// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rawpipe {

// Dense NCHW float64 tensor.
struct Tensor4 {
  int n = 0, c = 0, h = 0, w = 0;
  std::vector<double> v;

  Tensor4() = default;
  Tensor4(int n_, int c_, int h_, int w_, double fill = 0.0)
      : n(n_), c(c_), h(h_), w(w_), v(static_cast<size_t>(n_) * c_ * h_ * w_, fill) {
    if (n_ <= 0 || c_ <= 0 || h_ <= 0 || w_ <= 0) {
      throw std::invalid_argument("Tensor4: non-positive dimension");
    }
  }

  size_t size() const { return v.size(); }
  size_t plane_size() const { return static_cast<size_t>(h) * w; }

  double* plane(int in, int ic) {
    return v.data() + (static_cast<size_t>(in) * c + ic) * plane_size();
  }
  const double* plane(int in, int ic) const {
    return v.data() + (static_cast<size_t>(in) * c + ic) * plane_size();
  }

  double& at(int in, int ic, int ih, int iw) {
    return v[((static_cast<size_t>(in) * c + ic) * h + ih) * w + iw];
  }
  double at(int in, int ic, int ih, int iw) const {
    return v[((static_cast<size_t>(in) * c + ic) * h + ih) * w + iw];
  }

  bool same_shape(const Tensor4& o) const {
    return n == o.n && c == o.c && h == o.h && w == o.w;
  }
};

// Named view of one parameter vector and its gradient accumulator.
struct ParamView {
  std::string name;
  std::vector<double>* value = nullptr;
  std::vector<double>* grad = nullptr;
};

// Forward-pass mode: `train` uses batch statistics and stores caches for
// backward; `eval` uses running statistics and keeps no caches; `linear`
// bypasses normalization and activations entirely (used by the spatial
// support diagnostics, which require a purely linear network).
enum class NnMode { train, eval, linear };

}  // namespace rawpipe
