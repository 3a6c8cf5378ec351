/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "afterimage/render.hpp"

namespace afterimage::png {

  class PngError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  /// Lossless 8-bit RGB PNG, no alpha.
  std::vector<std::uint8_t> encode(const render::RasterImage &img);

  /// Accepts any PNG libpng can read; the result is converted to 8-bit RGB.
  render::RasterImage decode(std::span<const std::uint8_t> bytes);

  void write_file(const std::filesystem::path &path, const render::RasterImage &img);
  render::RasterImage read_file(const std::filesystem::path &path);

}  // namespace afterimage::png
