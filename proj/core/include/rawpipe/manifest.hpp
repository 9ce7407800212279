// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rawpipe {

// FNV-1a 64-bit content hashes (stable across platforms, no dependencies).
uint64_t fnv1a(std::string_view data);
uint64_t fnv1a_file(const std::string& path);  // throws if unreadable

std::string iso8601_utc_now();

struct CheckpointRef {
  std::string path;
  uint64_t hash = 0;  // fnv1a of the file contents
};

// Record of one CLI run: everything needed to replay it and to audit what it
// produced. Written as manifest.json next to the run's outputs.
struct RunManifest {
  std::string command_line;
  uint64_t config_hash = 0;  // fnv1a over the resolved settings text
  uint64_t seed = 0;
  std::string version;
  std::string git_revision;
  std::vector<CheckpointRef> checkpoints;
  std::string started;   // ISO 8601 UTC
  std::string finished;
  std::vector<std::string> outputs;  // files produced, relative to the manifest
};

void write_manifest(const std::string& path, const RunManifest& m);

}  // namespace rawpipe
