/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "afterimage/png.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>
#include <png.h>

namespace afterimage::png {

  namespace {

    // Releases the png_image's internal state on every exit path.
    struct ImageGuard {
      png_image *image;
      ~ImageGuard() {
        png_image_free(image);
      }
    };

  }  // namespace

  std::vector<std::uint8_t> encode(const render::RasterImage &img) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_RGB;
    ImageGuard guard{&image};

    png_alloc_size_t size = 0;
    const auto row_stride = static_cast<png_int_32>(img.width() * 3);
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.bytes().data(), row_stride,
                                   nullptr)) {
      throw PngError(fmt::format("png size query failed: {}", image.message));
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.bytes().data(), row_stride,
                                   nullptr)) {
      throw PngError(fmt::format("png encode failed: {}", image.message));
    }
    out.resize(size);
    return out;
  }

  render::RasterImage decode(std::span<const std::uint8_t> bytes) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    ImageGuard guard{&image};

    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
      throw PngError(fmt::format("png decode failed: {}", image.message));
    }
    image.format = PNG_FORMAT_RGB;
    render::RasterImage out(static_cast<int>(image.width), static_cast<int>(image.height));
    if (!png_image_finish_read(&image, nullptr, out.bytes().data(), 0, nullptr)) {
      throw PngError(fmt::format("png decode failed: {}", image.message));
    }
    return out;
  }

  void write_file(const std::filesystem::path &path, const render::RasterImage &img) {
    const auto bytes = encode(img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw PngError(fmt::format("cannot open {} for writing", path.string()));
    }
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      throw PngError(fmt::format("failed writing {}", path.string()));
    }
  }

  render::RasterImage read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw PngError(fmt::format("cannot open {}", path.string()));
    }
    const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                          std::istreambuf_iterator<char>()};
    return decode(bytes);
  }

}  // namespace afterimage::png
