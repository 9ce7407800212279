// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include "rawpipe/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace rawpipe {

void Adam::step(const std::vector<ParamView>& params, double lr) {
  if (m_.empty()) {
    m_.resize(params.size());
    v_.resize(params.size());
    for (size_t i = 0; i < params.size(); ++i) {
      m_[i].assign(params[i].value->size(), 0.0);
      v_[i].assign(params[i].value->size(), 0.0);
    }
  }
  if (m_.size() != params.size()) throw std::invalid_argument("Adam::step: parameter set changed");
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (size_t i = 0; i < params.size(); ++i) {
    auto& value = *params[i].value;
    const auto& grad = *params[i].grad;
    if (value.size() != m_[i].size() || grad.size() != value.size()) {
      throw std::invalid_argument("Adam::step: shape mismatch");
    }
    for (size_t k = 0; k < value.size(); ++k) {
      const double g = grad[k];
      m_[i][k] = beta1_ * m_[i][k] + (1.0 - beta1_) * g;
      v_[i][k] = beta2_ * v_[i][k] + (1.0 - beta2_) * g * g;
      const double mhat = m_[i][k] / bc1;
      const double vhat = v_[i][k] / bc2;
      value[k] -= lr * mhat / (std::sqrt(vhat) + eps_);
    }
  }
}

void Adam::restore(int64_t t, std::vector<std::vector<double>> m,
                   std::vector<std::vector<double>> v) {
  t_ = t;
  m_ = std::move(m);
  v_ = std::move(v);
}

double lr_schedule(int64_t step, double lr0, int64_t decay_interval, double decay_factor) {
  if (step < 0) throw std::invalid_argument("lr_schedule: negative step");
  if (decay_interval <= 0) return lr0;
  return lr0 * std::pow(decay_factor, static_cast<double>(step / decay_interval));
}

}  // namespace rawpipe
