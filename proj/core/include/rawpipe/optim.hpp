// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <cstdint>
#include <vector>

#include "rawpipe/tensor.hpp"

namespace rawpipe {

// ADAM with bias correction; defaults beta1=0.9, beta2=0.999, eps=1e-8.
class Adam {
 public:
  explicit Adam(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : beta1_(beta1), beta2_(beta2), eps_(eps) {}

  // One update over all parameters; gradients are read from each view.
  void step(const std::vector<ParamView>& params, double lr);

  int64_t step_count() const { return t_; }

  // Flat state access for checkpointing.
  const std::vector<std::vector<double>>& moment1() const { return m_; }
  const std::vector<std::vector<double>>& moment2() const { return v_; }
  void restore(int64_t t, std::vector<std::vector<double>> m, std::vector<std::vector<double>> v);

  double beta1() const { return beta1_; }
  double beta2() const { return beta2_; }
  double eps() const { return eps_; }

 private:
  double beta1_, beta2_, eps_;
  int64_t t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

// Stepped exponential decay: lr0 * 0.9^floor(step / 3000).
double lr_schedule(int64_t step, double lr0, int64_t decay_interval = 3000,
                   double decay_factor = 0.9);

}  // namespace rawpipe
