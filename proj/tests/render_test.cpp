/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "afterimage/png.hpp"
#include "afterimage/render.hpp"
#include "support.hpp"

using namespace afterimage;
using namespace afterimage::render;

namespace {

  using Pixel = std::array<std::uint8_t, 3>;

  Pixel quantized(const Rgb &c) {
    return {quantize_channel(c.r()), quantize_channel(c.g()), quantize_channel(c.b())};
  }

  void check_pixel_near(const Pixel &actual, const Pixel &expected, int tol) {
    for (std::size_t ch = 0; ch < 3; ++ch) {
      INFO("channel ", ch, " actual ", int(actual[ch]), " expected ", int(expected[ch]));
      CHECK(std::abs(int(actual[ch]) - int(expected[ch])) <= tol);
    }
  }

  bool all_pixels(const RasterImage &img, const Pixel &p) {
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        if (img.pixel(x, y) != p) {
          return false;
        }
      }
    }
    return true;
  }

  Pixel center(const RasterImage &img, const Geometry &g) {
    const auto c = g.center_pixel();
    return img.pixel(c[0], c[1]);
  }

}  // namespace

TEST_CASE("geometry validation") {
  CHECK_NOTHROW(validate(Geometry{}));
  CHECK_NOTHROW(validate(Geometry::centered(64, 48, 10)));
  Geometry zero;
  zero.radius = 0;
  CHECK_THROWS_AS(validate(zero), std::invalid_argument);
  Geometry negative;
  negative.radius = -5;
  CHECK_THROWS_AS(validate(negative), std::invalid_argument);
  CHECK_THROWS_AS(validate(Geometry::centered(100, 100, 40)), std::invalid_argument);
  CHECK_THROWS_AS(validate(Geometry::centered(0, 100, 10)), std::invalid_argument);
  Geometry off_center;
  off_center.center_x = 100;
  CHECK_THROWS_AS(validate(off_center), std::invalid_argument);
  CHECK_THROWS_AS(render_stimulus(zero, kRed, kWhite), std::invalid_argument);
}

TEST_CASE("stimulus fills the circle and the surround") {
  const Geometry g;
  const auto img = render_stimulus(g, kRed, kWhite);
  CHECK(img.width() == 512);
  CHECK(img.height() == 512);
  CHECK(center(img, g) == Pixel{255, 0, 0});
  CHECK(img.pixel(0, 0) == Pixel{255, 255, 255});
  CHECK(img.pixel(511, 511) == Pixel{255, 255, 255});
  CHECK(img.pixel(256, 256 + 90) == Pixel{255, 0, 0});
  CHECK(img.pixel(256, 256 + 110) == Pixel{255, 255, 255});

  const Rgb soft{0.76, 1, 1};
  const auto soft_img = render_stimulus(g, soft, kBlack);
  CHECK(center(soft_img, g) == Pixel{194, 255, 255});
  CHECK(soft_img.pixel(3, 500) == Pixel{0, 0, 0});
}

TEST_CASE("circle edge is antialiased") {
  const Geometry g = Geometry::centered(64, 64, 16);
  CHECK(circle_coverage(g, 32, 32) == 1.0);
  CHECK(circle_coverage(g, 0, 0) == 0.0);
  const double edge = circle_coverage(g, 43, 43);
  CHECK(edge > 0.0);
  CHECK(edge < 1.0);
  const auto img = render_stimulus(g, kBlack, kWhite);
  const auto boundary = img.pixel(43, 43)[0];
  CHECK(boundary > 0);
  CHECK(boundary < 255);
}

TEST_CASE("stimulus with equal colors is uniform") {
  const Geometry g = Geometry::centered(80, 60, 12);
  const Rgb c{0.3, 0.6, 0.9};
  CHECK(render_stimulus(g, c, c) == render_uniform(g, c));
}

TEST_CASE("uniform panels") {
  const Geometry g = Geometry::centered(40, 30, 5);
  CHECK(all_pixels(render_uniform(g, kWhite), {255, 255, 255}));
  CHECK(all_pixels(render_uniform(g, kBlack), {0, 0, 0}));
  CHECK(all_pixels(render_uniform(g, {0.76, 1, 1}), {194, 255, 255}));
}

TEST_CASE("gaussian kernel") {
  const auto k = gaussian_kernel({4.0, 0});
  CHECK(k.size() == 25);
  CHECK(std::accumulate(k.begin(), k.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < k.size() / 2; ++i) {
    CHECK(k[i] == k[k.size() - 1 - i]);
    CHECK(k[i] < k[i + 1]);
  }
  CHECK(gaussian_kernel({1.0, 5}).size() == 11);
  CHECK_THROWS_AS(gaussian_kernel({0.0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_kernel({-1.0, 0}), std::invalid_argument);
}

TEST_CASE("blur of an impulse reproduces the kernel") {
  const BlurSettings s{2.0, 0};
  const int r = s.effective_radius();
  FloatImage img(31, 31);
  img.set(15, 15, kWhite);
  const auto out = gaussian_blur(img, s);

  // Direct evaluation of the normalized 2D Gaussian.
  double norm = 0.0;
  for (int i = -r; i <= r; ++i) {
    norm += std::exp(-(i * i) / (2.0 * s.sigma * s.sigma));
  }
  double total = 0.0;
  for (int y = 0; y < 31; ++y) {
    for (int x = 0; x < 31; ++x) {
      const int dx = x - 15;
      const int dy = y - 15;
      double expected = 0.0;
      if (std::abs(dx) <= r && std::abs(dy) <= r) {
        expected = std::exp(-(dx * dx + dy * dy) / (2.0 * s.sigma * s.sigma)) / (norm * norm);
      }
      for (int ch = 0; ch < 3; ++ch) {
        REQUIRE(std::abs(out.at(x, y, ch) - expected) <= 1e-12);
      }
      total += out.at(x, y, 0);
    }
  }
  CHECK(std::abs(total - 1.0) <= 1e-6);
}

TEST_CASE("blur preserves a uniform image") {
  const Geometry g = Geometry::centered(48, 48, 8);
  const Rgb c{0.2, 0.55, 0.9};
  const auto img = render_uniform(g, c);
  const auto blurred = gaussian_blur(img, BlurSettings{3.0, 0});
  for (int y = 0; y < 48; ++y) {
    for (int x = 0; x < 48; ++x) {
      check_pixel_near(blurred.pixel(x, y), img.pixel(x, y), 1);
    }
  }
}

TEST_CASE("afterimage panel keeps the center color") {
  const Geometry g;
  const auto p = predict({kRed, kWhite, kWhite});
  const auto panel = render_afterimage_panel(g, p.afterimage_test, p.afterimage_inducing, {});
  check_pixel_near(center(panel, g), {194, 255, 255}, 2);
  check_pixel_near(panel.pixel(5, 5), quantized(p.afterimage_inducing), 2);

  const Rgb same{0.4, 0.1, 0.7};
  CHECK(all_pixels(render_afterimage_panel(g, same, same, {}), quantized(same)));
}

TEST_CASE("figure panels") {
  const Geometry g;
  const BlurSettings s;
  SUBCASE("red on white, white after") {
    const auto f = render_figure({kRed, kWhite, kWhite}, BaselineScheme::Group2, g, s);
    CHECK(center(f.stimulus, g) == Pixel{255, 0, 0});
    CHECK(all_pixels(f.next, {255, 255, 255}));
    check_pixel_near(center(f.baseline, g), quantized({0, 0.9, 0.9}), 2);
    check_pixel_near(center(f.predicted, g), quantized({0.76, 1, 1}), 2);
  }
  SUBCASE("blue on red, magenta after") {
    const auto f = render_figure({kBlue, kRed, kMagenta}, BaselineScheme::Group2, g, s);
    check_pixel_near(f.predicted.pixel(10, 10), quantized({0.8, 0.2, 1.0}), 2);
  }
  SUBCASE("black new color") {
    const auto f = render_figure({kRed, kWhite, kBlack}, BaselineScheme::Group2, g, s);
    CHECK(all_pixels(f.next, {0, 0, 0}));
  }
}

TEST_CASE("rendering is deterministic") {
  const Geometry g = Geometry::centered(200, 150, 40);
  testing::Gen gen(31);
  for (int i = 0; i < 5; ++i) {
    const auto t = gen.rgb();
    const auto o = gen.rgb();
    CHECK(render_stimulus(g, t, o) == render_stimulus(g, t, o));
    CHECK(render_afterimage_panel(g, t, o, {}) == render_afterimage_panel(g, t, o, {}));
  }
}

TEST_CASE("png round trip") {
  SUBCASE("random pixels") {
    RasterImage img(37, 19);
    testing::Gen gen(32);
    for (auto &b : img.bytes()) {
      b = static_cast<std::uint8_t>(gen.below(256));
    }
    CHECK(png::decode(png::encode(img)) == img);
  }
  SUBCASE("single white pixel") {
    RasterImage img(1, 1);
    img.set_pixel(0, 0, {255, 255, 255});
    const auto bytes = png::encode(img);
    REQUIRE(bytes.size() > 8);
    CHECK(bytes[0] == 0x89);
    CHECK(bytes[1] == 'P');
    const auto back = png::decode(bytes);
    CHECK(back.width() == 1);
    CHECK(back.pixel(0, 0) == Pixel{255, 255, 255});
  }
  SUBCASE("full size panel through a file") {
    testing::TempDir dir;
    const Geometry g;
    const auto panel = render_stimulus(g, kGreen, kWhite);
    const auto path = dir.path() / "panel.png";
    png::write_file(path, panel);
    const auto back = png::read_file(path);
    CHECK(back.width() == 512);
    CHECK(back.height() == 512);
    CHECK(back == panel);
    CHECK_THROWS_AS(png::write_file(dir.path() / "missing" / "x.png", panel), png::PngError);
  }
  SUBCASE("garbage is rejected") {
    const std::vector<std::uint8_t> junk{1, 2, 3, 4, 5};
    CHECK_THROWS_AS(png::decode(junk), png::PngError);
    CHECK_THROWS(png::read_file("/nonexistent/dir/x.png"));
  }
}
