/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace afterimage {

  /**
   * A color in the normalized RGB cube. Components are kept at full double
   * precision; quantization to 8 bits only happens when rasterizing.
   *
   * The constructor rejects components outside [0, 1] (and NaN). Use
   * Rgb::clamped() when saturation is the intended behaviour.
   */
  class Rgb {
   public:
    constexpr Rgb() = default;
    constexpr Rgb(double r, double g, double b)
        : r_(checked(r)), g_(checked(g)), b_(checked(b)) {}

    /// Builds a color by clamping each component into [0, 1]. Every
    /// component that actually moves is counted by clamp_activations().
    static Rgb clamped(double r, double g, double b);

    constexpr double r() const {
      return r_;
    }
    constexpr double g() const {
      return g_;
    }
    constexpr double b() const {
      return b_;
    }

    constexpr double operator[](std::size_t channel) const {
      return channel == 0 ? r_ : channel == 1 ? g_ : b_;
    }

    constexpr std::array<double, 3> components() const {
      return {r_, g_, b_};
    }

    friend constexpr bool operator==(const Rgb &, const Rgb &) = default;

   private:
    static constexpr double checked(double v) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("color component outside [0, 1]");
      }
      return v;
    }

    double r_{0.0};
    double g_{0.0};
    double b_{0.0};
  };

  enum class NamedColor {
    Red,
    Green,
    Blue,
    Cyan,
    Magenta,
    Yellow,
    White,
    Black,
  };

  inline constexpr std::array<NamedColor, 8> kAllNamedColors{
      NamedColor::Red,     NamedColor::Green,  NamedColor::Blue,
      NamedColor::Cyan,    NamedColor::Magenta, NamedColor::Yellow,
      NamedColor::White,   NamedColor::Black,
  };

  constexpr Rgb to_rgb(NamedColor color) {
    switch (color) {
      case NamedColor::Red:
        return {1, 0, 0};
      case NamedColor::Green:
        return {0, 1, 0};
      case NamedColor::Blue:
        return {0, 0, 1};
      case NamedColor::Cyan:
        return {0, 1, 1};
      case NamedColor::Magenta:
        return {1, 0, 1};
      case NamedColor::Yellow:
        return {1, 1, 0};
      case NamedColor::White:
        return {1, 1, 1};
      case NamedColor::Black:
        return {0, 0, 0};
    }
    return {};
  }

  inline constexpr Rgb kRed = to_rgb(NamedColor::Red);
  inline constexpr Rgb kGreen = to_rgb(NamedColor::Green);
  inline constexpr Rgb kBlue = to_rgb(NamedColor::Blue);
  inline constexpr Rgb kCyan = to_rgb(NamedColor::Cyan);
  inline constexpr Rgb kMagenta = to_rgb(NamedColor::Magenta);
  inline constexpr Rgb kYellow = to_rgb(NamedColor::Yellow);
  inline constexpr Rgb kWhite = to_rgb(NamedColor::White);
  inline constexpr Rgb kBlack = to_rgb(NamedColor::Black);

  /// Upper-case name as used in figure captions, e.g. "RED".
  std::string_view name(NamedColor color);

  /// Exact-match reverse lookup.
  std::optional<NamedColor> named_color_of(const Rgb &color);

  enum class InducingClass { White, Chromatic };

  inline constexpr double kWhiteTolerance = 1e-6;

  /// 1 - c, componentwise.
  constexpr Rgb opposite(const Rgb &c) {
    return {1.0 - c.r(), 1.0 - c.g(), 1.0 - c.b()};
  }

  /// k * c, clamped to the unit cube. Throws std::invalid_argument if k < 0.
  Rgb scale(const Rgb &c, double k);

  /// Convex combination w * c1 + (1 - w) * c2. The result of each channel
  /// never leaves [min(c1, c2), max(c1, c2)], so no clamping is needed.
  /// Throws std::invalid_argument if w is outside [0, 1].
  Rgb mix(const Rgb &c1, const Rgb &c2, double w);

  /// White iff every component is >= 1 - tol. Black and grays are Chromatic.
  InducingClass classify_inducing(const Rgb &c, double tol = kWhiteTolerance);

  /// Process-wide count of clamped channels since startup (diagnostics).
  std::uint64_t clamp_activations();

  /// Accepts the eight color names (case-insensitive) or an "r,g,b" triple
  /// of reals in [0, 1]. Throws std::invalid_argument on anything else.
  Rgb parse_color(std::string_view text);

  /// "(0.76, 1, 1)" style rendering with up to 6 significant digits.
  std::string to_string(const Rgb &c);

  /// Quantizes one channel as round(255 * v).
  constexpr std::uint8_t quantize_channel(double v) {
    const double scaled = v * 255.0 + 0.5;
    if (!(scaled > 0.0)) {
      return 0;
    }
    if (scaled >= 255.0) {
      return 255;
    }
    return static_cast<std::uint8_t>(scaled);
  }

}  // namespace afterimage
