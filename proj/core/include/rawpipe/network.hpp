// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rawpipe/blocks.hpp"
#include "rawpipe/tensor.hpp"

namespace rawpipe {

// Residual reconstruction network: 3->64 3x3 conv + ReLU head, a body of
// identical blocks, and a linear 64->3 3x3 tail that emits the (signed)
// residual. The production networks use 16 blocks (32 for the single-stage
// variant); smaller bodies are permitted for tests.
struct NetworkSpec {
  BlockKind block_kind = BlockKind::inception;
  int body_blocks = 16;
  int in_ch = 3;
  int features = 64;
  int out_ch = 3;
};

class Network {
 public:
  explicit Network(const NetworkSpec& spec);

  Tensor4 forward(const Tensor4& x, NnMode mode);
  Tensor4 backward(const Tensor4& gout);  // valid after forward(train)
  void drop_caches();

  // He-style initialization: conv weights ~ N(0, 2/fan_in) from the seeded
  // generator, all biases zero, BN scale 1 / shift 0, running stats reset.
  void init_he(uint64_t seed);
  void init_zero();  // all conv weights and biases zero (identity residual)

  std::vector<ParamView> params();         // learnable parameters
  std::vector<ParamView> state_buffers();  // BN running statistics
  size_t param_count() const;              // learnable scalars only
  void zero_grad();

  const NetworkSpec& spec() const { return spec_; }

  ConvUnit& head() { return head_; }
  ConvUnit& tail() { return tail_; }
  std::vector<Block>& body() { return body_; }

 private:
  NetworkSpec spec_;
  ConvUnit head_;
  std::vector<Block> body_;
  ConvUnit tail_;
};

size_t param_count(const NetworkSpec& spec);

}  // namespace rawpipe
