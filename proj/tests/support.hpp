/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "afterimage/color.hpp"

namespace afterimage::testing {

  /// Seeded source of random test inputs. Seeds are fixed so failures
  /// reproduce; the seed is printed by callers on failure.
  class Gen {
   public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1] with arbitrary low bits.
    double unit() {
      return std::uniform_real_distribution<double>(0.0, std::nextafter(1.0, 2.0))(engine_);
    }

    /// Uniform on the 2^-53 grid in [0, 1).
    double grid_unit() {
      return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Mostly uniform, with endpoints and 1/2 mixed in.
    double edgy_unit() {
      switch (engine_() % 8) {
        case 0:
          return 0.0;
        case 1:
          return 1.0;
        case 2:
          return 0.5;
        default:
          return unit();
      }
    }

    Rgb rgb() {
      return {edgy_unit(), edgy_unit(), edgy_unit()};
    }

    Rgb grid_rgb() {
      return {grid_unit(), grid_unit(), grid_unit()};
    }

    std::int64_t ppm() {
      return static_cast<std::int64_t>(engine_() % 1'000'001);
    }

    std::uint64_t below(std::uint64_t n) {
      return engine_() % n;
    }

    std::mt19937_64 &engine() {
      return engine_;
    }

   private:
    std::mt19937_64 engine_;
  };

  /// Fresh directory under the system temp dir, removed on destruction.
  class TempDir {
   public:
    TempDir() {
      std::random_device rd;
      path_ = std::filesystem::temp_directory_path()
              / ("afterimage-test-" + std::to_string(rd()) + std::to_string(rd()));
      std::filesystem::create_directories(path_);
    }
    ~TempDir() {
      std::error_code ec;
      std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;

    const std::filesystem::path &path() const {
      return path_;
    }

   private:
    std::filesystem::path path_;
  };

}  // namespace afterimage::testing
