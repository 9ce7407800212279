// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include "rawpipe/layers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rawpipe {

Conv2d::Conv2d(int in_ch, int out_ch, int kernel) : in_ch_(in_ch), out_ch_(out_ch), k_(kernel) {
  if (kernel != 1 && kernel != 3) throw std::invalid_argument("Conv2d: kernel must be 1 or 3");
  if (in_ch <= 0 || out_ch <= 0) throw std::invalid_argument("Conv2d: bad channel counts");
  weight.assign(static_cast<size_t>(out_ch) * in_ch * kernel * kernel, 0.0);
  bias.assign(out_ch, 0.0);
  wgrad.assign(weight.size(), 0.0);
  bgrad.assign(bias.size(), 0.0);
}

Tensor4 Conv2d::forward(const Tensor4& x, bool keep_cache) {
  if (x.c != in_ch_) throw std::invalid_argument("Conv2d::forward: channel mismatch");
  const int h = x.h, w = x.w;
  Tensor4 out(x.n, out_ch_, h, w);
  const int pad = (k_ - 1) / 2;
  for (int n = 0; n < x.n; ++n) {
    for (int co = 0; co < out_ch_; ++co) {
      double* op = out.plane(n, co);
      std::fill(op, op + out.plane_size(), bias[co]);
      for (int ci = 0; ci < in_ch_; ++ci) {
        const double* ip = x.plane(n, ci);
        const double* wb = weight.data() + (static_cast<size_t>(co) * in_ch_ + ci) * k_ * k_;
        for (int ky = 0; ky < k_; ++ky) {
          const int dy = ky - pad;
          const int ylo = std::max(0, -dy), yhi = h - std::max(0, dy);
          for (int kx = 0; kx < k_; ++kx) {
            const int dx = kx - pad;
            const int xlo = std::max(0, -dx), xhi = w - std::max(0, dx);
            const double wv = wb[ky * k_ + kx];
            for (int y = ylo; y < yhi; ++y) {
              const double* src = ip + static_cast<size_t>(y + dy) * w + (xlo + dx);
              double* dst = op + static_cast<size_t>(y) * w + xlo;
              const int count = xhi - xlo;
              for (int t = 0; t < count; ++t) dst[t] += wv * src[t];
            }
          }
        }
      }
    }
  }
  if (keep_cache) x_cache_ = x;
  return out;
}

Tensor4 Conv2d::backward(const Tensor4& gout) {
  const Tensor4& x = x_cache_;
  if (x.size() == 0) throw std::logic_error("Conv2d::backward without cached forward");
  if (gout.n != x.n || gout.c != out_ch_ || gout.h != x.h || gout.w != x.w) {
    throw std::invalid_argument("Conv2d::backward: shape mismatch");
  }
  const int h = x.h, w = x.w;
  const int pad = (k_ - 1) / 2;
  Tensor4 gx(x.n, in_ch_, h, w);
  for (int n = 0; n < x.n; ++n) {
    for (int co = 0; co < out_ch_; ++co) {
      const double* gp = gout.plane(n, co);
      double bacc = 0.0;
      for (size_t t = 0; t < gout.plane_size(); ++t) bacc += gp[t];
      bgrad[co] += bacc;
      for (int ci = 0; ci < in_ch_; ++ci) {
        const double* ip = x.plane(n, ci);
        double* gxp = gx.plane(n, ci);
        const size_t wb = (static_cast<size_t>(co) * in_ch_ + ci) * k_ * k_;
        for (int ky = 0; ky < k_; ++ky) {
          const int dy = ky - pad;
          const int ylo = std::max(0, -dy), yhi = h - std::max(0, dy);
          for (int kx = 0; kx < k_; ++kx) {
            const int dx = kx - pad;
            const int xlo = std::max(0, -dx), xhi = w - std::max(0, dx);
            const int count = xhi - xlo;
            const double wv = weight[wb + ky * k_ + kx];
            double wacc = 0.0;
            for (int y = ylo; y < yhi; ++y) {
              const double* gr = gp + static_cast<size_t>(y) * w + xlo;
              const double* xr = ip + static_cast<size_t>(y + dy) * w + (xlo + dx);
              double* gxr = gxp + static_cast<size_t>(y + dy) * w + (xlo + dx);
              for (int t = 0; t < count; ++t) {
                wacc += gr[t] * xr[t];
                gxr[t] += wv * gr[t];
              }
            }
            wgrad[wb + ky * k_ + kx] += wacc;
          }
        }
      }
    }
  }
  return gx;
}

BatchNorm::BatchNorm(int channels) : ch_(channels) {
  if (channels <= 0) throw std::invalid_argument("BatchNorm: bad channel count");
  gamma.assign(channels, 1.0);
  beta.assign(channels, 0.0);
  ggamma.assign(channels, 0.0);
  gbeta.assign(channels, 0.0);
  running_mean.assign(channels, 0.0);
  running_var.assign(channels, 1.0);
}

void BatchNorm::drop_cache() {
  xhat_cache_ = Tensor4();
  inv_std_cache_.clear();
}

Tensor4 BatchNorm::forward(const Tensor4& x, NnMode mode) {
  if (x.c != ch_) throw std::invalid_argument("BatchNorm::forward: channel mismatch");
  if (mode == NnMode::linear) return x;  // bypass: purely linear diagnostics
  Tensor4 out(x.n, x.c, x.h, x.w);
  const size_t ps = x.plane_size();
  if (mode == NnMode::eval) {
    for (int c = 0; c < ch_; ++c) {
      const double inv = 1.0 / std::sqrt(running_var[c] + kEps);
      const double g = gamma[c], b = beta[c], m = running_mean[c];
      for (int n = 0; n < x.n; ++n) {
        const double* ip = x.plane(n, c);
        double* op = out.plane(n, c);
        for (size_t t = 0; t < ps; ++t) op[t] = g * (ip[t] - m) * inv + b;
      }
    }
    return out;
  }
  // Training: batch statistics (biased variance).
  xhat_cache_ = Tensor4(x.n, x.c, x.h, x.w);
  inv_std_cache_.assign(ch_, 0.0);
  const double m_count = static_cast<double>(x.n) * ps;
  for (int c = 0; c < ch_; ++c) {
    double sum = 0.0, sq = 0.0;
    for (int n = 0; n < x.n; ++n) {
      const double* ip = x.plane(n, c);
      for (size_t t = 0; t < ps; ++t) {
        sum += ip[t];
        sq += ip[t] * ip[t];
      }
    }
    const double mean = sum / m_count;
    double var = sq / m_count - mean * mean;
    if (var < 0.0) var = 0.0;  // guard against rounding on constant inputs
    const double inv = 1.0 / std::sqrt(var + kEps);
    inv_std_cache_[c] = inv;
    const double g = gamma[c], b = beta[c];
    for (int n = 0; n < x.n; ++n) {
      const double* ip = x.plane(n, c);
      double* xh = xhat_cache_.plane(n, c);
      double* op = out.plane(n, c);
      for (size_t t = 0; t < ps; ++t) {
        xh[t] = (ip[t] - mean) * inv;
        op[t] = g * xh[t] + b;
      }
    }
    running_mean[c] = kMomentum * running_mean[c] + (1.0 - kMomentum) * mean;
    running_var[c] = kMomentum * running_var[c] + (1.0 - kMomentum) * var;
  }
  return out;
}

Tensor4 BatchNorm::backward(const Tensor4& gout) {
  const Tensor4& xh = xhat_cache_;
  if (xh.size() == 0) throw std::logic_error("BatchNorm::backward without cached forward");
  if (!gout.same_shape(xh)) throw std::invalid_argument("BatchNorm::backward: shape mismatch");
  Tensor4 gx(gout.n, gout.c, gout.h, gout.w);
  const size_t ps = gout.plane_size();
  const double m_count = static_cast<double>(gout.n) * ps;
  for (int c = 0; c < ch_; ++c) {
    double sum_dy = 0.0, sum_dy_xh = 0.0;
    for (int n = 0; n < gout.n; ++n) {
      const double* gp = gout.plane(n, c);
      const double* xp = xh.plane(n, c);
      for (size_t t = 0; t < ps; ++t) {
        sum_dy += gp[t];
        sum_dy_xh += gp[t] * xp[t];
      }
    }
    gbeta[c] += sum_dy;
    ggamma[c] += sum_dy_xh;
    const double g = gamma[c];
    const double inv = inv_std_cache_[c];
    const double k1 = g * inv;
    for (int n = 0; n < gout.n; ++n) {
      const double* gp = gout.plane(n, c);
      const double* xp = xh.plane(n, c);
      double* op = gx.plane(n, c);
      for (size_t t = 0; t < ps; ++t) {
        op[t] = k1 * (gp[t] - sum_dy / m_count - xp[t] * sum_dy_xh / m_count);
      }
    }
  }
  return gx;
}

Tensor4 ReLU::forward(const Tensor4& x, bool keep_cache) {
  Tensor4 out(x.n, x.c, x.h, x.w);
  if (keep_cache) mask_.assign(x.size(), 0);
  for (size_t t = 0; t < x.size(); ++t) {
    const bool pos = x.v[t] > 0.0;
    out.v[t] = pos ? x.v[t] : 0.0;
    if (keep_cache) mask_[t] = pos ? 1 : 0;
  }
  return out;
}

Tensor4 ReLU::backward(const Tensor4& gout) {
  if (mask_.size() != gout.size()) throw std::logic_error("ReLU::backward without cached forward");
  Tensor4 gx(gout.n, gout.c, gout.h, gout.w);
  for (size_t t = 0; t < gout.size(); ++t) gx.v[t] = mask_[t] ? gout.v[t] : 0.0;
  return gx;
}

}  // namespace rawpipe
