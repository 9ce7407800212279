// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include "rawpipe/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "rawpipe/rng.hpp"

namespace rawpipe {

Network::Network(const NetworkSpec& spec)
    : spec_(spec),
      head_(spec.in_ch, spec.features, 3, /*with_bn=*/false, /*with_relu=*/true),
      tail_(spec.features, spec.out_ch, 3, /*with_bn=*/false, /*with_relu=*/false) {
  if (spec.body_blocks < 0) throw std::invalid_argument("NetworkSpec: negative body length");
  body_.reserve(spec.body_blocks);
  for (int i = 0; i < spec.body_blocks; ++i) body_.emplace_back(spec.block_kind, spec.features);
}

Tensor4 Network::forward(const Tensor4& x, NnMode mode) {
  Tensor4 t = head_.forward(x, mode);
  for (auto& block : body_) t = block.forward(t, mode);
  return tail_.forward(t, mode);
}

Tensor4 Network::backward(const Tensor4& gout) {
  Tensor4 g = tail_.backward(gout);
  for (auto it = body_.rbegin(); it != body_.rend(); ++it) g = it->backward(g);
  return head_.backward(g);
}

void Network::drop_caches() {
  head_.drop_caches();
  for (auto& block : body_) block.drop_caches();
  tail_.drop_caches();
}

namespace {

void for_each_unit(Network& net, const std::function<void(const std::string&, ConvUnit&)>& fn) {
  fn("head", net.head());
  for (size_t b = 0; b < net.body().size(); ++b) {
    auto& branches = net.body()[b].branches();
    for (size_t br = 0; br < branches.size(); ++br) {
      for (size_t u = 0; u < branches[br].size(); ++u) {
        fn("body." + std::to_string(b) + ".b" + std::to_string(br) + "." + std::to_string(u),
           branches[br][u]);
      }
    }
  }
  fn("tail", net.tail());
}

}  // namespace

void Network::init_he(uint64_t seed) {
  SeededRng rng(seed);
  for_each_unit(*this, [&](const std::string&, ConvUnit& unit) {
    Conv2d& conv = unit.conv;
    const double fan_in = static_cast<double>(conv.in_ch()) * conv.kernel() * conv.kernel();
    const double stddev = std::sqrt(2.0 / fan_in);
    for (auto& w : conv.weight) w = stddev * rng.normal();
    std::fill(conv.bias.begin(), conv.bias.end(), 0.0);
    if (unit.has_bn) {
      std::fill(unit.bn.gamma.begin(), unit.bn.gamma.end(), 1.0);
      std::fill(unit.bn.beta.begin(), unit.bn.beta.end(), 0.0);
      std::fill(unit.bn.running_mean.begin(), unit.bn.running_mean.end(), 0.0);
      std::fill(unit.bn.running_var.begin(), unit.bn.running_var.end(), 1.0);
    }
  });
  zero_grad();
}

void Network::init_zero() {
  for_each_unit(*this, [&](const std::string&, ConvUnit& unit) {
    std::fill(unit.conv.weight.begin(), unit.conv.weight.end(), 0.0);
    std::fill(unit.conv.bias.begin(), unit.conv.bias.end(), 0.0);
    if (unit.has_bn) {
      std::fill(unit.bn.gamma.begin(), unit.bn.gamma.end(), 1.0);
      std::fill(unit.bn.beta.begin(), unit.bn.beta.end(), 0.0);
      std::fill(unit.bn.running_mean.begin(), unit.bn.running_mean.end(), 0.0);
      std::fill(unit.bn.running_var.begin(), unit.bn.running_var.end(), 1.0);
    }
  });
  zero_grad();
}

std::vector<ParamView> Network::params() {
  std::vector<ParamView> out;
  for_each_unit(*this, [&](const std::string& name, ConvUnit& unit) {
    out.push_back({name + ".conv.w", &unit.conv.weight, &unit.conv.wgrad});
    out.push_back({name + ".conv.b", &unit.conv.bias, &unit.conv.bgrad});
    if (unit.has_bn) {
      out.push_back({name + ".bn.gamma", &unit.bn.gamma, &unit.bn.ggamma});
      out.push_back({name + ".bn.beta", &unit.bn.beta, &unit.bn.gbeta});
    }
  });
  return out;
}

std::vector<ParamView> Network::state_buffers() {
  std::vector<ParamView> out;
  for_each_unit(*this, [&](const std::string& name, ConvUnit& unit) {
    if (unit.has_bn) {
      out.push_back({name + ".bn.running_mean", &unit.bn.running_mean, nullptr});
      out.push_back({name + ".bn.running_var", &unit.bn.running_var, nullptr});
    }
  });
  return out;
}

size_t Network::param_count() const {
  size_t total = 0;
  auto& self = const_cast<Network&>(*this);
  for_each_unit(self, [&](const std::string&, ConvUnit& unit) {
    total += unit.conv.weight.size() + unit.conv.bias.size();
    if (unit.has_bn) total += unit.bn.gamma.size() + unit.bn.beta.size();
  });
  return total;
}

void Network::zero_grad() {
  for (auto& p : params()) {
    if (p.grad) std::fill(p.grad->begin(), p.grad->end(), 0.0);
  }
}

size_t param_count(const NetworkSpec& spec) {
  Network net(spec);
  return net.param_count();
}

}  // namespace rawpipe
