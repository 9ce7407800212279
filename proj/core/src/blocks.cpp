// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include "rawpipe/blocks.hpp"

#include <cctype>
#include <stdexcept>

namespace rawpipe {

BlockKind parse_block_kind(std::string_view name) {
  std::string s(name);
  for (auto& ch : s) {
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (ch == '_') ch = '-';
  }
  if (s == "inception") return BlockKind::inception;
  if (s == "inception-minus" || s == "inception-") return BlockKind::inception_minus;
  if (s == "conv-bn-relu") return BlockKind::conv_bn_relu;
  throw std::invalid_argument("unknown block kind: " + std::string(name));
}

std::string to_string(BlockKind k) {
  switch (k) {
    case BlockKind::inception: return "inception";
    case BlockKind::inception_minus: return "inception-minus";
    case BlockKind::conv_bn_relu: return "conv-bn-relu";
  }
  throw std::invalid_argument("invalid BlockKind");
}

Tensor4 ConvUnit::forward(const Tensor4& x, NnMode mode) {
  const bool train = mode == NnMode::train;
  Tensor4 y = conv.forward(x, train);
  if (has_bn) y = bn.forward(y, mode);
  if (has_relu && mode != NnMode::linear) y = relu.forward(y, train);
  return y;
}

Tensor4 ConvUnit::backward(const Tensor4& gout) {
  Tensor4 g = gout;
  if (has_relu) g = relu.backward(g);
  if (has_bn) g = bn.backward(g);
  return conv.backward(g);
}

void ConvUnit::drop_caches() {
  conv.drop_cache();
  bn.drop_cache();
  relu.drop_cache();
}

namespace {

struct UnitPlan {
  int out_ch;
  int kernel;
};

std::vector<std::vector<UnitPlan>> branch_plans(BlockKind kind) {
  switch (kind) {
    case BlockKind::inception:
      return {{{32, 1}, {16, 1}}, {{32, 1}, {32, 3}, {16, 3}}, {{32, 1}, {32, 3}, {32, 3}}};
    case BlockKind::inception_minus:
      return {{{16, 1}}, {{16, 1}, {16, 3}}, {{16, 1}, {32, 3}, {32, 3}}};
    case BlockKind::conv_bn_relu:
      return {{{64, 3}}};
  }
  throw std::invalid_argument("invalid BlockKind");
}

}  // namespace

Block::Block(BlockKind kind, int channels) : kind_(kind) {
  const auto plans = branch_plans(kind);
  int concat = 0;
  for (const auto& plan : plans) {
    std::vector<ConvUnit> units;
    int in_ch = channels;
    for (const auto& u : plan) {
      units.emplace_back(in_ch, u.out_ch, u.kernel, /*with_bn=*/true, /*with_relu=*/true);
      in_ch = u.out_ch;
    }
    concat += in_ch;
    branches_.push_back(std::move(units));
  }
  if (concat != channels) throw std::logic_error("Block: branch widths must sum to the input width");
}

Tensor4 Block::forward(const Tensor4& x, NnMode mode) {
  Tensor4 out(x.n, x.c, x.h, x.w);
  int ch_offset = 0;
  for (auto& branch : branches_) {
    Tensor4 t = x;
    for (auto& unit : branch) t = unit.forward(t, mode);
    // Concatenate this branch's channels, then the residual skip adds x below.
    for (int n = 0; n < x.n; ++n) {
      for (int c = 0; c < t.c; ++c) {
        double* dst = out.plane(n, ch_offset + c);
        const double* src = t.plane(n, c);
        for (size_t k = 0; k < t.plane_size(); ++k) dst[k] = src[k];
      }
    }
    ch_offset += t.c;
  }
  for (size_t k = 0; k < out.size(); ++k) out.v[k] += x.v[k];
  return out;
}

Tensor4 Block::backward(const Tensor4& gout) {
  Tensor4 gx = gout;  // skip path
  int ch_offset = 0;
  for (auto& branch : branches_) {
    const int bc = branch.back().conv.out_ch();
    Tensor4 gb(gout.n, bc, gout.h, gout.w);
    for (int n = 0; n < gout.n; ++n) {
      for (int c = 0; c < bc; ++c) {
        const double* src = gout.plane(n, ch_offset + c);
        double* dst = gb.plane(n, c);
        for (size_t k = 0; k < gb.plane_size(); ++k) dst[k] = src[k];
      }
    }
    for (auto it = branch.rbegin(); it != branch.rend(); ++it) gb = it->backward(gb);
    for (size_t k = 0; k < gx.size(); ++k) gx.v[k] += gb.v[k];
    ch_offset += bc;
  }
  return gx;
}

void Block::drop_caches() {
  for (auto& branch : branches_) {
    for (auto& unit : branch) unit.drop_caches();
  }
}

size_t block_param_count(BlockKind kind) {
  size_t total = 0;
  int channels = 64;
  for (const auto& plan : branch_plans(kind)) {
    int in_ch = channels;
    for (const auto& u : plan) {
      total += static_cast<size_t>(u.out_ch) * in_ch * u.kernel * u.kernel;  // weights
      total += u.out_ch;                                                     // biases
      total += 2 * static_cast<size_t>(u.out_ch);                            // BN gamma, beta
      in_ch = u.out_ch;
    }
  }
  return total;
}

}  // namespace rawpipe
