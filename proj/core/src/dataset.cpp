// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include "rawpipe/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <stdexcept>

#include "rawpipe/image_io.hpp"

namespace fs = std::filesystem;

namespace rawpipe {
namespace {

bool image_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".tif" || ext == ".tiff";
}

}  // namespace

std::vector<NamedImage> ingest_dataset(const std::string& dir,
                                       std::vector<std::string>* warnings) {
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("dataset directory not found: " + dir);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && image_extension(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

  std::vector<NamedImage> out;
  for (const auto& f : files) {
    try {
      out.push_back({f.stem().string(), read_image(f.string())});
    } catch (const std::exception& e) {
      if (warnings != nullptr) {
        warnings->push_back("skipped unreadable image " + f.string() + ": " + e.what());
      }
    }
  }
  if (out.empty()) throw std::runtime_error("no decodable images in " + dir);
  return out;
}

}  // namespace rawpipe
