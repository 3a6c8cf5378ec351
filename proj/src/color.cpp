/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "afterimage/color.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace afterimage {

  namespace {

    std::atomic<std::uint64_t> g_clamp_activations{0};

    double clamp_unit(double v) {
      if (std::isnan(v)) {
        throw std::invalid_argument("color component is NaN");
      }
      if (v < 0.0) {
        g_clamp_activations.fetch_add(1, std::memory_order_relaxed);
        return 0.0;
      }
      if (v > 1.0) {
        g_clamp_activations.fetch_add(1, std::memory_order_relaxed);
        return 1.0;
      }
      return v;
    }

    std::string lower(std::string_view text) {
      std::string out(text);
      std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) {
        return static_cast<char>(std::tolower(ch));
      });
      return out;
    }

    std::string_view trim(std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
      }
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
      }
      return s;
    }

    double parse_component(std::string_view field, std::string_view whole) {
      field = trim(field);
      double value = 0.0;
      const auto *end = field.data() + field.size();
      auto [ptr, ec] = std::from_chars(field.data(), end, value);
      if (field.empty() || ec != std::errc{} || ptr != end) {
        throw std::invalid_argument(
            fmt::format("invalid color component '{}' in '{}'", field, whole));
      }
      if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument(
            fmt::format("color component {} in '{}' is outside [0, 1]", value, whole));
      }
      return value;
    }

  }  // namespace

  Rgb Rgb::clamped(double r, double g, double b) {
    Rgb out;
    out.r_ = clamp_unit(r);
    out.g_ = clamp_unit(g);
    out.b_ = clamp_unit(b);
    return out;
  }

  std::string_view name(NamedColor color) {
    switch (color) {
      case NamedColor::Red:
        return "RED";
      case NamedColor::Green:
        return "GREEN";
      case NamedColor::Blue:
        return "BLUE";
      case NamedColor::Cyan:
        return "CYAN";
      case NamedColor::Magenta:
        return "MAGENTA";
      case NamedColor::Yellow:
        return "YELLOW";
      case NamedColor::White:
        return "WHITE";
      case NamedColor::Black:
        return "BLACK";
    }
    return "?";
  }

  std::optional<NamedColor> named_color_of(const Rgb &color) {
    for (auto named : kAllNamedColors) {
      if (to_rgb(named) == color) {
        return named;
      }
    }
    return std::nullopt;
  }

  Rgb scale(const Rgb &c, double k) {
    if (!(k >= 0.0) || !std::isfinite(k)) {
      throw std::invalid_argument(fmt::format("scale factor must be a finite value >= 0, got {}", k));
    }
    return Rgb::clamped(k * c.r(), k * c.g(), k * c.b());
  }

  Rgb mix(const Rgb &c1, const Rgb &c2, double w) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw std::invalid_argument(fmt::format("mix weight must lie in [0, 1], got {}", w));
    }
    // std::lerp(a, b, t) is exact at both ends and never overshoots b.
    return {std::lerp(c2.r(), c1.r(), w), std::lerp(c2.g(), c1.g(), w),
            std::lerp(c2.b(), c1.b(), w)};
  }

  InducingClass classify_inducing(const Rgb &c, double tol) {
    const double floor = 1.0 - tol;
    return (c.r() >= floor && c.g() >= floor && c.b() >= floor) ? InducingClass::White
                                                                 : InducingClass::Chromatic;
  }

  std::uint64_t clamp_activations() {
    return g_clamp_activations.load(std::memory_order_relaxed);
  }

  Rgb parse_color(std::string_view text) {
    const auto trimmed = trim(text);
    const auto key = lower(trimmed);
    for (auto named : kAllNamedColors) {
      if (key == lower(name(named))) {
        return to_rgb(named);
      }
    }

    std::vector<std::string_view> fields;
    std::string_view rest = trimmed;
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) {
        break;
      }
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 3) {
      throw std::invalid_argument(fmt::format(
          "unknown color '{}': expected one of red, green, blue, cyan, magenta, yellow, "
          "white, black or an r,g,b triple",
          text));
    }
    return {parse_component(fields[0], text), parse_component(fields[1], text),
            parse_component(fields[2], text)};
  }

  std::string to_string(const Rgb &c) {
    return fmt::format("({:.6g}, {:.6g}, {:.6g})", c.r(), c.g(), c.b());
  }

}  // namespace afterimage
