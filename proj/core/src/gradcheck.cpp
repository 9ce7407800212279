// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include "rawpipe/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

#include "rawpipe/bayer.hpp"
#include "rawpipe/blocks.hpp"
#include "rawpipe/layers.hpp"
#include "rawpipe/network.hpp"
#include "rawpipe/pipeline.hpp"

namespace rawpipe {
namespace {

void randn_fill(SeededRng& rng, std::vector<double>& v, double scale) {
  for (auto& x : v) x = rng.normal(0.0, scale);
}

Tensor4 randn_tensor(SeededRng& rng, int n, int c, int h, int w, double scale = 1.0) {
  Tensor4 t(n, c, h, w);
  randn_fill(rng, t.v, scale);
  return t;
}

// 0.5 * sum(y^2); gout = y. A data-dependent upstream gradient that exercises
// every output position.
double half_square_sum(const Tensor4& y, Tensor4* gout) {
  double acc = 0.0;
  for (double x : y.v) acc += x * x;
  if (gout != nullptr) *gout = y;
  return 0.5 * acc;
}

// Gives batch-norm scale/shift non-default values so their gradients are
// exercised away from the (gamma=1, beta=0) special case.
void jitter_batchnorm(Network& net, SeededRng& rng) {
  for (auto& view : net.params()) {
    if (view.name.find(".bn.gamma") != std::string::npos) {
      for (auto& g : *view.value) g = 1.0 + rng.normal(0.0, 0.2);
    } else if (view.name.find(".bn.beta") != std::string::npos) {
      for (auto& b : *view.value) b = rng.normal(0.0, 0.1);
    }
  }
}

void jitter_batchnorm(Block& block, SeededRng& rng) {
  for (auto& branch : block.branches()) {
    for (auto& unit : branch) {
      for (auto& g : unit.bn.gamma) g = 1.0 + rng.normal(0.0, 0.2);
      for (auto& b : unit.bn.beta) b = rng.normal(0.0, 0.1);
    }
  }
}

void he_init_block(Block& block, SeededRng& rng) {
  for (auto& branch : block.branches()) {
    for (auto& unit : branch) {
      const double fan_in = static_cast<double>(unit.conv.in_ch()) * unit.conv.kernel() *
                            unit.conv.kernel();
      randn_fill(rng, unit.conv.weight, std::sqrt(2.0 / fan_in));
      std::fill(unit.conv.bias.begin(), unit.conv.bias.end(), 0.0);
    }
  }
}

struct Probe {
  size_t view;
  size_t index;
};

std::vector<Probe> pick_probes(const std::vector<ParamView>& wrt, SeededRng& rng,
                               int max_probes) {
  std::vector<Probe> probes;
  std::set<std::pair<size_t, size_t>> seen;
  const size_t nviews = wrt.size();
  size_t total = 0;
  for (const auto& v : wrt) total += v.value->size();
  const size_t budget = std::max<size_t>(max_probes, nviews);

  // At least one probe per tensor so small vectors (biases, BN shifts) are
  // always covered, then fill the budget with size-weighted random draws.
  const size_t quota = std::max<size_t>(1, budget / std::max<size_t>(1, nviews));
  for (size_t vi = 0; vi < nviews; ++vi) {
    const size_t sz = wrt[vi].value->size();
    const size_t take = std::min(quota, sz);
    for (size_t t = 0; t < take; ++t) {
      const size_t k = rng.uniform_below(sz);
      if (seen.emplace(vi, k).second) probes.push_back({vi, k});
    }
  }
  int attempts = 0;
  while (probes.size() < budget && attempts < 16 * static_cast<int>(budget)) {
    ++attempts;
    size_t pick = rng.uniform_below(total);
    size_t vi = 0;
    while (pick >= wrt[vi].value->size()) pick -= wrt[vi++].value->size();
    if (seen.emplace(vi, pick).second) probes.push_back({vi, pick});
  }
  return probes;
}

}  // namespace

GradCheckResult check_gradients(const std::string& name, const std::vector<ParamView>& wrt,
                                const std::function<double(bool)>& loss, SeededRng& probe_rng,
                                const GradCheckConfig& cfg) {
  if (wrt.empty()) throw std::invalid_argument("check_gradients: empty parameter list");

  loss(true);
  std::vector<std::vector<double>> analytic(wrt.size());
  for (size_t vi = 0; vi < wrt.size(); ++vi) analytic[vi] = *wrt[vi].grad;

  const auto probes = pick_probes(wrt, probe_rng, cfg.max_probes);
  auto fd_at = [&](const Probe& p, double h) {
    double& slot = (*wrt[p.view].value)[p.index];
    const double old = slot;
    slot = old + h;
    const double fp = loss(false);
    slot = old - h;
    const double fm = loss(false);
    slot = old;
    return (fp - fm) / (2.0 * h);
  };

  std::vector<double> fd(probes.size());
  double max_a = 0.0, max_f = 0.0;
  for (size_t i = 0; i < probes.size(); ++i) {
    fd[i] = fd_at(probes[i], cfg.step);
    max_a = std::max(max_a, std::abs(analytic[probes[i].view][probes[i].index]));
    max_f = std::max(max_f, std::abs(fd[i]));
  }

  auto denom = [&] { return max_a + max_f + 1e-12; };
  for (size_t i = 0; i < probes.size(); ++i) {
    const double a = analytic[probes[i].view][probes[i].index];
    if (std::abs(a - fd[i]) > 0.25 * cfg.tolerance * denom()) {
      // Suspicious probe: shrink the step. Kink artifacts vanish, bugs stay.
      for (double h : {cfg.step / 8.0, cfg.step / 64.0}) {
        const double f2 = fd_at(probes[i], h);
        if (std::abs(a - f2) < std::abs(a - fd[i])) fd[i] = f2;
      }
      max_f = std::max(max_f, std::abs(fd[i]));
    }
  }

  GradCheckResult res;
  res.name = name;
  res.checked = static_cast<int64_t>(probes.size());
  double max_diff = 0.0;
  for (size_t i = 0; i < probes.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(analytic[probes[i].view][probes[i].index] - fd[i]));
  }
  res.max_rel_err = max_diff / denom();
  res.pass = res.max_rel_err < cfg.tolerance;
  return res;
}

namespace {

using CaseFn = std::function<GradCheckResult(uint64_t seed, const GradCheckConfig&)>;

std::vector<ParamView> conv_views(Conv2d& conv) {
  return {{"w", &conv.weight, &conv.wgrad}, {"b", &conv.bias, &conv.bgrad}};
}

GradCheckResult conv_case(const std::string& name, int in_ch, int out_ch, int kernel,
                          uint64_t seed, const GradCheckConfig& cfg) {
  SeededRng rng(seed);
  Conv2d conv(in_ch, out_ch, kernel);
  randn_fill(rng, conv.weight, std::sqrt(2.0 / (in_ch * kernel * kernel)));
  randn_fill(rng, conv.bias, 0.1);
  Tensor4 x = randn_tensor(rng, 2, in_ch, 5, 5);
  std::vector<double> xgrad(x.size(), 0.0);

  auto loss = [&](bool with_grad) {
    if (with_grad) {
      std::fill(conv.wgrad.begin(), conv.wgrad.end(), 0.0);
      std::fill(conv.bgrad.begin(), conv.bgrad.end(), 0.0);
    }
    Tensor4 y = conv.forward(x, with_grad);
    Tensor4 gout;
    const double l = half_square_sum(y, with_grad ? &gout : nullptr);
    if (with_grad) xgrad = conv.backward(gout).v;
    return l;
  };

  std::vector<ParamView> wrt = conv_views(conv);
  wrt.push_back({"input", &x.v, &xgrad});
  SeededRng probe_rng(seed ^ 0x5bd1e995u);
  return check_gradients(name, wrt, loss, probe_rng, cfg);
}

GradCheckResult batchnorm_case(uint64_t seed, const GradCheckConfig& cfg) {
  SeededRng rng(seed);
  BatchNorm bn(4);
  for (auto& g : bn.gamma) g = 1.0 + rng.normal(0.0, 0.3);
  for (auto& b : bn.beta) b = rng.normal(0.0, 0.2);
  Tensor4 x = randn_tensor(rng, 2, 4, 6, 6, 1.5);
  std::vector<double> xgrad(x.size(), 0.0);

  auto loss = [&](bool with_grad) {
    if (with_grad) {
      std::fill(bn.ggamma.begin(), bn.ggamma.end(), 0.0);
      std::fill(bn.gbeta.begin(), bn.gbeta.end(), 0.0);
    }
    Tensor4 y = bn.forward(x, NnMode::train);
    Tensor4 gout;
    const double l = half_square_sum(y, with_grad ? &gout : nullptr);
    if (with_grad) xgrad = bn.backward(gout).v;
    return l;
  };

  std::vector<ParamView> wrt = {{"gamma", &bn.gamma, &bn.ggamma},
                                {"beta", &bn.beta, &bn.gbeta},
                                {"input", &x.v, &xgrad}};
  SeededRng probe_rng(seed ^ 0x5bd1e995u);
  return check_gradients("batchnorm", wrt, loss, probe_rng, cfg);
}

GradCheckResult relu_case(uint64_t seed, const GradCheckConfig& cfg) {
  SeededRng rng(seed);
  ReLU relu;
  Tensor4 x = randn_tensor(rng, 2, 3, 5, 5);
  // Keep inputs clear of the kink so the finite difference is well defined.
  for (auto& v : x.v) {
    if (std::abs(v) < 0.05) v = v < 0.0 ? v - 0.1 : v + 0.1;
  }
  std::vector<double> xgrad(x.size(), 0.0);

  auto loss = [&](bool with_grad) {
    Tensor4 y = relu.forward(x, with_grad);
    Tensor4 gout;
    const double l = half_square_sum(y, with_grad ? &gout : nullptr);
    if (with_grad) xgrad = relu.backward(gout).v;
    return l;
  };

  std::vector<ParamView> wrt = {{"input", &x.v, &xgrad}};
  SeededRng probe_rng(seed ^ 0x5bd1e995u);
  return check_gradients("relu", wrt, loss, probe_rng, cfg);
}

std::vector<ParamView> block_views(Block& block) {
  std::vector<ParamView> wrt;
  int bi = 0;
  for (auto& branch : block.branches()) {
    int ui = 0;
    for (auto& unit : branch) {
      const std::string base = "b" + std::to_string(bi) + "." + std::to_string(ui) + ".";
      wrt.push_back({base + "w", &unit.conv.weight, &unit.conv.wgrad});
      wrt.push_back({base + "b", &unit.conv.bias, &unit.conv.bgrad});
      wrt.push_back({base + "gamma", &unit.bn.gamma, &unit.bn.ggamma});
      wrt.push_back({base + "beta", &unit.bn.beta, &unit.bn.gbeta});
      ++ui;
    }
    ++bi;
  }
  return wrt;
}

void zero_block_grads(Block& block) {
  for (auto& branch : block.branches()) {
    for (auto& unit : branch) {
      std::fill(unit.conv.wgrad.begin(), unit.conv.wgrad.end(), 0.0);
      std::fill(unit.conv.bgrad.begin(), unit.conv.bgrad.end(), 0.0);
      std::fill(unit.bn.ggamma.begin(), unit.bn.ggamma.end(), 0.0);
      std::fill(unit.bn.gbeta.begin(), unit.bn.gbeta.end(), 0.0);
    }
  }
}

GradCheckResult block_case(BlockKind kind, uint64_t seed, const GradCheckConfig& cfg) {
  SeededRng rng(seed);
  Block block(kind, 64);
  he_init_block(block, rng);
  jitter_batchnorm(block, rng);
  Tensor4 x = randn_tensor(rng, 1, 64, 4, 4);
  std::vector<double> xgrad(x.size(), 0.0);

  auto loss = [&](bool with_grad) {
    if (with_grad) zero_block_grads(block);
    Tensor4 y = block.forward(x, NnMode::train);
    Tensor4 gout;
    const double l = half_square_sum(y, with_grad ? &gout : nullptr);
    if (with_grad) xgrad = block.backward(gout).v;
    return l;
  };

  std::vector<ParamView> wrt = block_views(block);
  wrt.push_back({"input", &x.v, &xgrad});
  SeededRng probe_rng(seed ^ 0x5bd1e995u);
  return check_gradients("block-" + to_string(kind), wrt, loss, probe_rng, cfg);
}

GradCheckResult network_case(uint64_t seed, const GradCheckConfig& cfg) {
  SeededRng rng(seed);
  NetworkSpec spec;
  spec.body_blocks = 1;
  Network net(spec);
  net.init_he(rng.next_u64());
  jitter_batchnorm(net, rng);
  Tensor4 x = randn_tensor(rng, 1, 3, 6, 6);
  std::vector<double> xgrad(x.size(), 0.0);

  auto loss = [&](bool with_grad) {
    if (with_grad) net.zero_grad();
    Tensor4 y = net.forward(x, NnMode::train);
    Tensor4 gout;
    const double l = half_square_sum(y, with_grad ? &gout : nullptr);
    if (with_grad) xgrad = net.backward(gout).v;
    return l;
  };

  std::vector<ParamView> wrt = net.params();
  wrt.push_back({"input", &x.v, &xgrad});
  SeededRng probe_rng(seed ^ 0x5bd1e995u);
  return check_gradients("network-small", wrt, loss, probe_rng, cfg);
}

// Stage-1 training loss: the network refines a classical base image, the
// recorded samples are written back through the mask, and the mean
// half-squared error is taken against ground truth. Gradients reach the
// network only through non-recorded positions.
GradCheckResult demosaic_loss_case(uint64_t seed, const GradCheckConfig& cfg) {
  SeededRng rng(seed);
  NetworkSpec spec;
  spec.body_blocks = 1;
  Network net(spec);
  net.init_he(rng.next_u64());
  jitter_batchnorm(net, rng);

  const int hw = 6;
  const CfaMask mask = make_mask(BayerPattern::rggb, hw, hw);
  Tensor4 mask_t(1, 3, hw, hw);
  for (int c = 0; c < 3; ++c) {
    double* dst = mask_t.plane(0, c);
    for (size_t k = 0; k < mask.m[c].data.size(); ++k) dst[k] = mask.m[c].data[k];
  }
  Tensor4 base = randn_tensor(rng, 1, 3, hw, hw);
  Tensor4 observed = randn_tensor(rng, 1, 3, hw, hw);
  Tensor4 gt = randn_tensor(rng, 1, 3, hw, hw);
  std::vector<double> base_grad(base.size(), 0.0);

  auto loss = [&](bool with_grad) {
    if (with_grad) net.zero_grad();
    Tensor4 r = net.forward(base, NnMode::train);
    Tensor4 comp(1, 3, hw, hw);
    for (size_t k = 0; k < comp.size(); ++k) {
      comp.v[k] = mask_t.v[k] != 0.0 ? observed.v[k] : base.v[k] + r.v[k];
    }
    Tensor4 gcomp;
    const double l = half_mse_loss(comp, gt, with_grad ? &gcomp : nullptr);
    if (with_grad) {
      Tensor4 gr(1, 3, hw, hw);
      for (size_t k = 0; k < gr.size(); ++k) {
        gr.v[k] = mask_t.v[k] != 0.0 ? 0.0 : gcomp.v[k];
      }
      const Tensor4 gx = net.backward(gr);
      for (size_t k = 0; k < base_grad.size(); ++k) base_grad[k] = gr.v[k] + gx.v[k];
    }
    return l;
  };

  std::vector<ParamView> wrt = net.params();
  wrt.push_back({"input", &base.v, &base_grad});
  SeededRng probe_rng(seed ^ 0x5bd1e995u);
  return check_gradients("loss-demosaic-composition", wrt, loss, probe_rng, cfg);
}

// Stage-2 training loss: prediction = x - G(x) against ground truth.
GradCheckResult denoise_loss_case(uint64_t seed, const GradCheckConfig& cfg) {
  SeededRng rng(seed);
  NetworkSpec spec;
  spec.body_blocks = 1;
  Network net(spec);
  net.init_he(rng.next_u64());
  jitter_batchnorm(net, rng);

  Tensor4 x = randn_tensor(rng, 1, 3, 6, 6);
  Tensor4 gt = randn_tensor(rng, 1, 3, 6, 6);
  std::vector<double> xgrad(x.size(), 0.0);

  auto loss = [&](bool with_grad) {
    if (with_grad) net.zero_grad();
    Tensor4 r = net.forward(x, NnMode::train);
    Tensor4 pred(1, 3, 6, 6);
    for (size_t k = 0; k < pred.size(); ++k) pred.v[k] = x.v[k] - r.v[k];
    Tensor4 gpred;
    const double l = half_mse_loss(pred, gt, with_grad ? &gpred : nullptr);
    if (with_grad) {
      Tensor4 gr = gpred;
      for (auto& v : gr.v) v = -v;
      const Tensor4 gx = net.backward(gr);
      for (size_t k = 0; k < xgrad.size(); ++k) xgrad[k] = gpred.v[k] + gx.v[k];
    }
    return l;
  };

  std::vector<ParamView> wrt = net.params();
  wrt.push_back({"input", &x.v, &xgrad});
  SeededRng probe_rng(seed ^ 0x5bd1e995u);
  return check_gradients("loss-denoise-residual", wrt, loss, probe_rng, cfg);
}

}  // namespace

std::vector<GradCheckResult> run_gradient_check_suite(uint64_t base_seed, int seeds,
                                                      const GradCheckConfig& cfg) {
  if (seeds <= 0) throw std::invalid_argument("run_gradient_check_suite: seeds must be positive");
  const std::vector<std::pair<std::string, CaseFn>> cases = {
      {"conv1x1",
       [](uint64_t s, const GradCheckConfig& c) { return conv_case("conv1x1", 3, 4, 1, s, c); }},
      {"conv3x3",
       [](uint64_t s, const GradCheckConfig& c) { return conv_case("conv3x3", 3, 3, 3, s, c); }},
      {"batchnorm", batchnorm_case},
      {"relu", relu_case},
      {"block-inception",
       [](uint64_t s, const GradCheckConfig& c) { return block_case(BlockKind::inception, s, c); }},
      {"block-inception-minus",
       [](uint64_t s, const GradCheckConfig& c) {
         return block_case(BlockKind::inception_minus, s, c);
       }},
      {"block-conv-bn-relu",
       [](uint64_t s, const GradCheckConfig& c) {
         return block_case(BlockKind::conv_bn_relu, s, c);
       }},
      {"network-small", network_case},
      {"loss-demosaic-composition", demosaic_loss_case},
      {"loss-denoise-residual", denoise_loss_case},
  };

  std::vector<GradCheckResult> out;
  out.reserve(cases.size());
  for (size_t ci = 0; ci < cases.size(); ++ci) {
    GradCheckResult agg;
    agg.name = cases[ci].first;
    agg.pass = true;
    for (int s = 0; s < seeds; ++s) {
      const uint64_t seed = base_seed + 1000003ULL * ci + 131ULL * static_cast<uint64_t>(s) + 1;
      GradCheckResult r = cases[ci].second(seed, cfg);
      agg.max_rel_err = std::max(agg.max_rel_err, r.max_rel_err);
      agg.checked += r.checked;
      agg.pass = agg.pass && r.pass;
    }
    out.push_back(std::move(agg));
  }
  return out;
}

}  // namespace rawpipe
