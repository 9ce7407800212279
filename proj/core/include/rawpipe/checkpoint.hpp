// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "rawpipe/network.hpp"
#include "rawpipe/optim.hpp"

namespace rawpipe {

// Descriptive metadata stored alongside the tensors in a checkpoint.
struct CheckpointMeta {
  std::string role;        // "demosaic", "denoise" or "joint"
  std::string sigma_tag;   // noise level the weights target, e.g. "sigma20"
  std::string preprocess;  // classical preprocess feeding the network, e.g. "gbtf"
  std::string pattern;     // CFA pattern the weights assume, e.g. "rggb"
  int64_t iteration = 0;   // optimizer steps completed when saved
  std::map<std::string, std::string> extra;
};

struct LoadedCheckpoint {
  Network net;  // architecture rebuilt from the stored description
  CheckpointMeta meta;
  std::optional<Adam> adam;             // present when optimizer state was saved
  std::optional<std::string> rng_state; // present when generator state was saved
};

// Serializes the network (learnable parameters and batch-norm running
// statistics), optional optimizer moments, and optional generator state to a
// single binary file. All float64 payloads are stored bit-exactly.
void save_checkpoint(const std::string& path, Network& net, const CheckpointMeta& meta,
                     const Adam* adam = nullptr, const std::string* rng_state = nullptr);

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace rawpipe
