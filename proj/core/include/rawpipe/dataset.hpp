// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <string>
#include <vector>

#include "rawpipe/image.hpp"

namespace rawpipe {

struct NamedImage {
  std::string name;  // file name without extension
  RgbImage image;
};

// Loads every .png/.tif/.tiff file in `dir` (non-recursive), sorted by file
// name. Files that fail to decode are skipped with a note appended to
// `warnings` (when given). Throws std::runtime_error if the directory is
// unreadable or contains no decodable image.
std::vector<NamedImage> ingest_dataset(const std::string& dir,
                                       std::vector<std::string>* warnings = nullptr);

}  // namespace rawpipe
