/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "afterimage/render.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace afterimage::render {

  namespace {

    constexpr int kSupersample = 4;

    void check_dimensions(int width, int height) {
      if (width <= 0 || height <= 0) {
        throw std::invalid_argument(
            fmt::format("image dimensions must be positive, got {}x{}", width, height));
      }
    }

  }  // namespace

  Geometry Geometry::centered(int width, int height, double radius) {
    return {width, height, width / 2.0, height / 2.0, radius};
  }

  std::array<int, 2> Geometry::center_pixel() const {
    return {static_cast<int>(std::floor(center_x)), static_cast<int>(std::floor(center_y))};
  }

  void validate(const Geometry &g) {
    check_dimensions(g.width, g.height);
    if (!(g.radius > 0.0) || !std::isfinite(g.radius)) {
      throw std::invalid_argument(fmt::format("circle radius must be positive, got {}", g.radius));
    }
    const double margin = g.radius * 1.5;
    if (g.center_x - margin < 0.0 || g.center_x + margin > g.width || g.center_y - margin < 0.0
        || g.center_y + margin > g.height) {
      throw std::invalid_argument(fmt::format(
          "circle (center {}, {}; radius {}) must stay at least radius/2 inside the {}x{} field",
          g.center_x, g.center_y, g.radius, g.width, g.height));
    }
  }

  RasterImage::RasterImage(int width, int height) : width_(width), height_(height) {
    check_dimensions(width, height);
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3, 0);
  }

  std::array<std::uint8_t, 3> RasterImage::pixel(int x, int y) const {
    const auto i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_)
                    + static_cast<std::size_t>(x))
                   * 3;
    return {data_.at(i), data_.at(i + 1), data_.at(i + 2)};
  }

  void RasterImage::set_pixel(int x, int y, std::array<std::uint8_t, 3> value) {
    const auto i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_)
                    + static_cast<std::size_t>(x))
                   * 3;
    std::copy(value.begin(), value.end(), data_.begin() + static_cast<std::ptrdiff_t>(i));
  }

  FloatImage::FloatImage(int width, int height, const Rgb &fill) : width_(width), height_(height) {
    check_dimensions(width, height);
    data_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
    for (std::size_t i = 0; i < data_.size(); i += 3) {
      data_[i] = fill.r();
      data_[i + 1] = fill.g();
      data_[i + 2] = fill.b();
    }
  }

  void FloatImage::set(int x, int y, const Rgb &c) {
    const auto i = index(x, y);
    data_[i] = c.r();
    data_[i + 1] = c.g();
    data_[i + 2] = c.b();
  }

  RasterImage FloatImage::quantize() const {
    RasterImage out(width_, height_);
    auto bytes = out.bytes();
    for (std::size_t i = 0; i < data_.size(); ++i) {
      bytes[i] = quantize_channel(data_[i]);
    }
    return out;
  }

  FloatImage FloatImage::from_raster(const RasterImage &img) {
    FloatImage out(img.width(), img.height());
    const auto bytes = img.bytes();
    for (std::size_t i = 0; i < bytes.size(); ++i) {
      out.data_[i] = bytes[i] / 255.0;
    }
    return out;
  }

  int BlurSettings::effective_radius() const {
    return radius > 0 ? radius : static_cast<int>(std::ceil(3.0 * sigma));
  }

  std::vector<double> gaussian_kernel(const BlurSettings &s) {
    if (!(s.sigma > 0.0) || !std::isfinite(s.sigma)) {
      throw std::invalid_argument(fmt::format("blur sigma must be positive, got {}", s.sigma));
    }
    const int r = s.effective_radius();
    std::vector<double> taps(static_cast<std::size_t>(2 * r + 1));
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
      const double w = std::exp(-(i * i) / (2.0 * s.sigma * s.sigma));
      taps[static_cast<std::size_t>(i + r)] = w;
      sum += w;
    }
    for (auto &w : taps) {
      w /= sum;
    }
    return taps;
  }

  double circle_coverage(const Geometry &g, int x, int y) {
    const double r2 = g.radius * g.radius;
    int inside = 0;
    for (int j = 0; j < kSupersample; ++j) {
      const double dy = y + (j + 0.5) / kSupersample - g.center_y;
      for (int i = 0; i < kSupersample; ++i) {
        const double dx = x + (i + 0.5) / kSupersample - g.center_x;
        if (dx * dx + dy * dy < r2) {
          ++inside;
        }
      }
    }
    return static_cast<double>(inside) / (kSupersample * kSupersample);
  }

  FloatImage rasterize_stimulus(const Geometry &g, const Rgb &test, const Rgb &inducing) {
    validate(g);
    FloatImage img(g.width, g.height, inducing);
    // Only pixels whose square can touch the disc need sampling.
    const int x0 = std::max(0, static_cast<int>(std::floor(g.center_x - g.radius)) - 1);
    const int x1 = std::min(g.width - 1, static_cast<int>(std::ceil(g.center_x + g.radius)) + 1);
    const int y0 = std::max(0, static_cast<int>(std::floor(g.center_y - g.radius)) - 1);
    const int y1 = std::min(g.height - 1, static_cast<int>(std::ceil(g.center_y + g.radius)) + 1);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double coverage = circle_coverage(g, x, y);
        if (coverage > 0.0) {
          img.set(x, y, mix(test, inducing, coverage));
        }
      }
    }
    return img;
  }

  RasterImage render_stimulus(const Geometry &g, const Rgb &test, const Rgb &inducing) {
    return rasterize_stimulus(g, test, inducing).quantize();
  }

  RasterImage render_uniform(const Geometry &g, const Rgb &c) {
    validate(g);
    return FloatImage(g.width, g.height, c).quantize();
  }

  FloatImage gaussian_blur(const FloatImage &img, const BlurSettings &s) {
    const auto taps = gaussian_kernel(s);
    const int r = s.effective_radius();
    const int w = img.width();
    const int h = img.height();

    FloatImage horizontal(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int ch = 0; ch < 3; ++ch) {
          double acc = 0.0;
          for (int k = -r; k <= r; ++k) {
            const int sx = std::clamp(x + k, 0, w - 1);
            acc += taps[static_cast<std::size_t>(k + r)] * img.at(sx, y, ch);
          }
          horizontal.at(x, y, ch) = acc;
        }
      }
    }

    FloatImage out(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int ch = 0; ch < 3; ++ch) {
          double acc = 0.0;
          for (int k = -r; k <= r; ++k) {
            const int sy = std::clamp(y + k, 0, h - 1);
            acc += taps[static_cast<std::size_t>(k + r)] * horizontal.at(x, sy, ch);
          }
          out.at(x, y, ch) = acc;
        }
      }
    }
    return out;
  }

  RasterImage gaussian_blur(const RasterImage &img, const BlurSettings &s) {
    return gaussian_blur(FloatImage::from_raster(img), s).quantize();
  }

  RasterImage render_afterimage_panel(const Geometry &g, const Rgb &test, const Rgb &inducing,
                                      const BlurSettings &s) {
    return gaussian_blur(rasterize_stimulus(g, test, inducing), s).quantize();
  }

  FigurePanels render_figure(const StimulusSpec &spec, BaselineScheme scheme, const Geometry &g,
                             const BlurSettings &s) {
    const auto baseline = complementary_baseline(spec, scheme);
    const auto prediction = predict(spec);
    return {
        render_stimulus(g, spec.test, spec.inducing),
        render_uniform(g, spec.next),
        render_afterimage_panel(g, baseline.test, baseline.inducing, s),
        render_afterimage_panel(g, prediction.afterimage_test, prediction.afterimage_inducing, s),
    };
  }

}  // namespace afterimage::render
