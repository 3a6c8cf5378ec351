/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "afterimage/color.hpp"
#include "afterimage/model.hpp"

namespace afterimage::render {

  /**
   * A circular test field centred inside a rectangular inducing field.
   * Coordinates are continuous; pixel (x, y) covers [x, x+1) x [y, y+1).
   */
  struct Geometry {
    int width{512};
    int height{512};
    double center_x{256.0};
    double center_y{256.0};
    double radius{100.0};

    /// Centred circle of the given radius.
    static Geometry centered(int width, int height, double radius);

    /// The pixel containing the circle centre.
    std::array<int, 2> center_pixel() const;

    friend bool operator==(const Geometry &, const Geometry &) = default;
  };

  /// Throws std::invalid_argument unless the circle has positive radius and
  /// keeps a margin of at least radius / 2 to every edge.
  void validate(const Geometry &g);

  /// 8-bit RGB, rows top to bottom, no padding.
  class RasterImage {
   public:
    RasterImage() = default;
    RasterImage(int width, int height);

    int width() const {
      return width_;
    }
    int height() const {
      return height_;
    }

    std::array<std::uint8_t, 3> pixel(int x, int y) const;
    void set_pixel(int x, int y, std::array<std::uint8_t, 3> value);

    std::span<const std::uint8_t> bytes() const {
      return data_;
    }
    std::span<std::uint8_t> bytes() {
      return data_;
    }

    friend bool operator==(const RasterImage &, const RasterImage &) = default;

   private:
    int width_{0};
    int height_{0};
    std::vector<std::uint8_t> data_;
  };

  /// Real-valued RGB image used before quantization. Values are not
  /// required to stay inside [0, 1] while filtering.
  class FloatImage {
   public:
    FloatImage() = default;
    FloatImage(int width, int height, const Rgb &fill = {});

    int width() const {
      return width_;
    }
    int height() const {
      return height_;
    }

    double at(int x, int y, int channel) const {
      return data_[index(x, y) + static_cast<std::size_t>(channel)];
    }
    double &at(int x, int y, int channel) {
      return data_[index(x, y) + static_cast<std::size_t>(channel)];
    }
    void set(int x, int y, const Rgb &c);

    /// round(255 * v) per channel after clamping to [0, 1].
    RasterImage quantize() const;

    static FloatImage from_raster(const RasterImage &img);

   private:
    std::size_t index(int x, int y) const {
      return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_)
              + static_cast<std::size_t>(x))
             * 3;
    }

    int width_{0};
    int height_{0};
    std::vector<double> data_;
  };

  struct BlurSettings {
    double sigma{4.0};
    /// Kernel half-width in pixels; 0 selects ceil(3 * sigma).
    int radius{0};

    int effective_radius() const;
  };

  /// Normalized 1-D Gaussian taps, length 2 * radius + 1.
  /// Throws std::invalid_argument unless sigma > 0.
  std::vector<double> gaussian_kernel(const BlurSettings &s);

  /// Fraction of the pixel covered by the circle, from 4x4 supersampling.
  double circle_coverage(const Geometry &g, int x, int y);

  FloatImage rasterize_stimulus(const Geometry &g, const Rgb &test, const Rgb &inducing);

  RasterImage render_stimulus(const Geometry &g, const Rgb &test, const Rgb &inducing);
  RasterImage render_uniform(const Geometry &g, const Rgb &c);

  /// Separable convolution per channel with edge clamping.
  FloatImage gaussian_blur(const FloatImage &img, const BlurSettings &s);
  /// Convenience overload: converts to real values, blurs, re-quantizes.
  RasterImage gaussian_blur(const RasterImage &img, const BlurSettings &s);

  /// Stimulus rasterized with the predicted colors, blurred before
  /// quantization.
  RasterImage render_afterimage_panel(const Geometry &g, const Rgb &test, const Rgb &inducing,
                                      const BlurSettings &s);

  struct FigurePanels {
    RasterImage stimulus;   ///< (a)
    RasterImage next;       ///< (b)
    RasterImage baseline;   ///< (c)
    RasterImage predicted;  ///< (d)
  };

  /// Throws std::invalid_argument if the scheme has no complement for the
  /// test color or the geometry is invalid.
  FigurePanels render_figure(const StimulusSpec &spec, BaselineScheme scheme, const Geometry &g,
                             const BlurSettings &s);

}  // namespace afterimage::render
