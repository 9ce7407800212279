// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include "rawpipe/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

#include <png.h>
#include <tiffio.h>

namespace rawpipe {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

bool has_suffix_ci(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  for (size_t i = 0; i < suffix.size(); ++i) {
    const char a = static_cast<char>(std::tolower(static_cast<unsigned char>(
        s[s.size() - suffix.size() + i])));
    if (a != suffix[i]) return false;
  }
  return true;
}

// Raw decoded PNG: `channels` interleaved samples per pixel, 8 or 16 bits.
struct PngRaster {
  int height = 0;
  int width = 0;
  int channels = 0;  // 1 (gray) or 3 (rgb) after transforms
  int bit_depth = 0;
  std::vector<uint16_t> samples;  // host-order values
};

PngRaster decode_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("cannot open " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw std::runtime_error("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("libpng init failed");
  }

  PngRaster out;
  std::vector<png_byte> row_bytes;
  std::vector<png_bytep> row_ptrs;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("failed to decode PNG: " + path);
  }

  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  out.height = static_cast<int>(png_get_image_height(png, info));
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  if ((out.channels != 1 && out.channels != 3) ||
      (out.bit_depth != 8 && out.bit_depth != 16)) {
    longjmp(png_jmpbuf(png), 1);
  }

  const size_t rowbytes = png_get_rowbytes(png, info);
  row_bytes.assign(rowbytes * out.height, 0);
  row_ptrs.resize(out.height);
  for (int i = 0; i < out.height; ++i) row_ptrs[i] = row_bytes.data() + rowbytes * i;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  out.samples.resize(static_cast<size_t>(out.height) * out.width * out.channels);
  const size_t per_row = static_cast<size_t>(out.width) * out.channels;
  for (int i = 0; i < out.height; ++i) {
    const png_byte* row = row_bytes.data() + rowbytes * i;
    uint16_t* dst = out.samples.data() + per_row * i;
    if (out.bit_depth == 8) {
      for (size_t k = 0; k < per_row; ++k) dst[k] = row[k];
    } else {  // PNG stores 16-bit samples big-endian
      for (size_t k = 0; k < per_row; ++k) {
        dst[k] = static_cast<uint16_t>((row[2 * k] << 8) | row[2 * k + 1]);
      }
    }
  }
  return out;
}

RgbImage read_png_rgb(const std::string& path) {
  const PngRaster raw = decode_png(path);
  const double scale = raw.bit_depth == 16 ? 255.0 / 65535.0 : 1.0;
  RgbImage img(raw.height, raw.width);
  const size_t per_row = static_cast<size_t>(raw.width) * raw.channels;
  for (int i = 0; i < raw.height; ++i) {
    const uint16_t* row = raw.samples.data() + per_row * i;
    for (int j = 0; j < raw.width; ++j) {
      if (raw.channels == 1) {
        const double v = row[j] * scale;
        img.r.at(i, j) = v;
        img.g.at(i, j) = v;
        img.b.at(i, j) = v;
      } else {
        img.r.at(i, j) = row[3 * j + 0] * scale;
        img.g.at(i, j) = row[3 * j + 1] * scale;
        img.b.at(i, j) = row[3 * j + 2] * scale;
      }
    }
  }
  return img;
}

RgbImage read_tiff_rgb(const std::string& path) {
  TIFFSetWarningHandler(nullptr);
  std::unique_ptr<TIFF, decltype(&TIFFClose)> tif(TIFFOpen(path.c_str(), "r"), &TIFFClose);
  if (!tif) throw std::runtime_error("cannot open " + path);
  uint32_t w = 0, h = 0;
  TIFFGetField(tif.get(), TIFFTAG_IMAGEWIDTH, &w);
  TIFFGetField(tif.get(), TIFFTAG_IMAGELENGTH, &h);
  if (w == 0 || h == 0) throw std::runtime_error("failed to decode TIFF: " + path);
  std::vector<uint32_t> raster(static_cast<size_t>(w) * h);
  if (TIFFReadRGBAImageOriented(tif.get(), w, h, raster.data(), ORIENTATION_TOPLEFT, 0) == 0) {
    throw std::runtime_error("failed to decode TIFF: " + path);
  }
  RgbImage img(static_cast<int>(h), static_cast<int>(w));
  for (uint32_t i = 0; i < h; ++i) {
    for (uint32_t j = 0; j < w; ++j) {
      const uint32_t px = raster[static_cast<size_t>(i) * w + j];
      img.r.at(static_cast<int>(i), static_cast<int>(j)) = TIFFGetR(px);
      img.g.at(static_cast<int>(i), static_cast<int>(j)) = TIFFGetG(px);
      img.b.at(static_cast<int>(i), static_cast<int>(j)) = TIFFGetB(px);
    }
  }
  return img;
}

void write_png(const std::string& path, int height, int width, int channels, int bit_depth,
               const std::vector<png_byte>& bytes) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("cannot open for writing: " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw std::runtime_error("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("libpng init failed");
  }
  std::vector<png_bytep> row_ptrs(height);
  const size_t rowbytes = static_cast<size_t>(width) * channels * (bit_depth / 8);
  for (int i = 0; i < height; ++i) {
    row_ptrs[i] = const_cast<png_bytep>(bytes.data() + rowbytes * i);
  }

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("failed to encode PNG: " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, bit_depth,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, row_ptrs.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

std::string sidecar_path(const std::string& path) { return path + ".pattern"; }

}  // namespace

RgbImage read_image(const std::string& path) {
  if (has_suffix_ci(path, ".tif") || has_suffix_ci(path, ".tiff")) return read_tiff_rgb(path);
  return read_png_rgb(path);
}

void write_png8(const std::string& path, const Rgb8Image& img) {
  std::vector<png_byte> bytes(static_cast<size_t>(img.height) * img.width * 3);
  for (int i = 0; i < img.height; ++i) {
    for (int j = 0; j < img.width; ++j) {
      const size_t k = (static_cast<size_t>(i) * img.width + j) * 3;
      bytes[k + 0] = img.at(0, i, j);
      bytes[k + 1] = img.at(1, i, j);
      bytes[k + 2] = img.at(2, i, j);
    }
  }
  write_png(path, img.height, img.width, 3, 8, bytes);
}

void write_cfa_png16(const std::string& path, const CfaImage& y) {
  const int h = y.height(), w = y.width();
  std::vector<png_byte> bytes(static_cast<size_t>(h) * w * 2);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      double v = std::round(y.samples.at(i, j) * 256.0);
      v = std::clamp(v, 0.0, 65535.0);
      const auto u = static_cast<uint16_t>(v);
      const size_t k = (static_cast<size_t>(i) * w + j) * 2;
      bytes[k] = static_cast<png_byte>(u >> 8);  // big-endian per the PNG format
      bytes[k + 1] = static_cast<png_byte>(u & 0xff);
    }
  }
  write_png(path, h, w, 1, 16, bytes);
  std::ofstream side(sidecar_path(path));
  if (!side) throw std::runtime_error("cannot write sidecar for " + path);
  side << to_string(y.pattern) << "\n";
}

CfaImage read_cfa_png16(const std::string& path, std::optional<BayerPattern> fallback) {
  const PngRaster raw = decode_png(path);
  if (raw.channels != 1 || raw.bit_depth != 16) {
    throw std::runtime_error("not a CFA container (expected 16-bit grayscale): " + path);
  }
  BayerPattern pattern;
  std::ifstream side(sidecar_path(path));
  if (side) {
    std::string name;
    side >> name;
    pattern = parse_pattern(name);
  } else if (fallback.has_value()) {
    pattern = *fallback;
  } else {
    throw std::runtime_error("missing pattern sidecar: " + sidecar_path(path));
  }
  Plane p(raw.height, raw.width);
  for (size_t k = 0; k < p.data.size(); ++k) p.data[k] = raw.samples[k] / 256.0;
  return CfaImage(std::move(p), pattern);
}

bool is_cfa_file(const std::string& path) {
  return std::filesystem::exists(sidecar_path(path));
}

}  // namespace rawpipe
