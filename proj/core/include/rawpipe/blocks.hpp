// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rawpipe/layers.hpp"
#include "rawpipe/tensor.hpp"

namespace rawpipe {

// The three 64->64 block designs used by the reconstruction networks:
//  - inception: three branches [1x1->32, 1x1->16], [1x1->32, 3x3->32, 3x3->16],
//    [1x1->32, 3x3->32, 3x3->32]; concatenated to 16+16+32 = 64 channels.
//  - inception_minus: branches [1x1->16], [1x1->16, 3x3->16],
//    [1x1->16, 3x3->32, 3x3->32]; concatenated to 64 channels.
//  - conv_bn_relu: a single 3x3 64->64 convolution.
// Every convolution is followed by batch normalization and ReLU (applied
// per branch before concatenation), and an identity skip adds the block input
// to the concatenated output.
enum class BlockKind { inception, inception_minus, conv_bn_relu };

BlockKind parse_block_kind(std::string_view name);
std::string to_string(BlockKind k);

// One conv [+ BN] [+ ReLU] step; BN/ReLU participation is configurable so the
// same unit also models the network head (conv+ReLU) and tail (conv only).
struct ConvUnit {
  Conv2d conv;
  BatchNorm bn;
  ReLU relu;
  bool has_bn = true;
  bool has_relu = true;

  ConvUnit(int in_ch, int out_ch, int kernel, bool with_bn, bool with_relu)
      : conv(in_ch, out_ch, kernel), bn(out_ch), has_bn(with_bn), has_relu(with_relu) {}

  Tensor4 forward(const Tensor4& x, NnMode mode);
  Tensor4 backward(const Tensor4& gout);
  void drop_caches();
};

class Block {
 public:
  Block(BlockKind kind, int channels);  // channels = 64 for the production nets

  Tensor4 forward(const Tensor4& x, NnMode mode);
  Tensor4 backward(const Tensor4& gout);  // includes the skip path
  void drop_caches();

  BlockKind kind() const { return kind_; }
  std::vector<std::vector<ConvUnit>>& branches() { return branches_; }
  const std::vector<std::vector<ConvUnit>>& branches() const { return branches_; }

 private:
  BlockKind kind_;
  std::vector<std::vector<ConvUnit>> branches_;
};

// Learnable parameter count (conv weights and biases plus BN scale/shift;
// running statistics excluded) for one block of the given kind at 64 channels.
size_t block_param_count(BlockKind kind);

}  // namespace rawpipe
