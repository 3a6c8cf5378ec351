/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "afterimage/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>

#include <fmt/format.h>

namespace afterimage {

  namespace {

    constexpr std::int64_t kUnitsPerOne = Weight::kScale * Weight::kScale;

    Weight ppm(std::int64_t v) {
      return Weight::from_ppm(v);
    }

    struct SpecialCase {
      NamedColor primary;
      std::int64_t alpha_ppm;
      std::int64_t beta_t_ppm;
      Provenance provenance;
    };

    // Green uses alpha = 0.75, beta_t = 0.45: these reproduce the printed
    // green/green afterimage (0.45, 0.8875, 0.45); (0.7, 0.4) gives
    // (0.4, 0.88, 0.4) instead.
    constexpr std::array<SpecialCase, 3> kSpecialCases{{
        {NamedColor::Red, 600'000, 350'000, Provenance::SpecialRed},
        {NamedColor::Green, 750'000, 450'000, Provenance::SpecialGreen},
        {NamedColor::Blue, 700'000, 400'000, Provenance::SpecialBlue},
    }};

    constexpr std::int64_t kDefaultAlphaPpm = 400'000;
    constexpr std::int64_t kDefaultBetaTPpm = 400'000;
    constexpr std::int64_t kBetaIWhitePpm = 100'000;
    constexpr std::int64_t kBetaIChromaticPpm = 200'000;

    double units_to_double(std::int64_t units) {
      return static_cast<double>(units) / static_cast<double>(kUnitsPerOne);
    }

    std::string lower(std::string_view text) {
      std::string out(text);
      std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) {
        return static_cast<char>(std::tolower(ch));
      });
      return out;
    }

  }  // namespace

  Weight Weight::from_ppm(std::int64_t value) {
    if (value <= 0 || value >= kScale) {
      throw std::invalid_argument(
          fmt::format("weight must lie strictly inside (0, 1), got {} ppm", value));
    }
    return Weight(value);
  }

  Weight Weight::from_double(double value) {
    if (!(value > 0.0 && value < 1.0)) {
      throw std::invalid_argument(
          fmt::format("weight must lie strictly inside (0, 1), got {}", value));
    }
    const auto rounded = static_cast<std::int64_t>(std::llround(value * static_cast<double>(kScale)));
    if (std::abs(static_cast<double>(rounded) / static_cast<double>(kScale) - value) > 1e-9) {
      throw std::invalid_argument(
          fmt::format("weight {} has more than six decimal places", value));
    }
    return from_ppm(rounded);
  }

  std::string_view to_string(Provenance provenance) {
    switch (provenance) {
      case Provenance::Default:
        return "Default";
      case Provenance::SpecialRed:
        return "SpecialRed";
      case Provenance::SpecialGreen:
        return "SpecialGreen";
      case Provenance::SpecialBlue:
        return "SpecialBlue";
      case Provenance::Manual:
        return "Manual";
    }
    return "?";
  }

  ModelParams ModelParams::defaults(Weight beta_i) {
    return {ppm(kDefaultAlphaPpm), ppm(kDefaultBetaTPpm), beta_i, Provenance::Default};
  }

  ModelParams ModelParams::special(NamedColor primary, Weight beta_i) {
    for (const auto &c : kSpecialCases) {
      if (c.primary == primary) {
        return {ppm(c.alpha_ppm), ppm(c.beta_t_ppm), beta_i, c.provenance};
      }
    }
    throw std::invalid_argument(
        fmt::format("no special parameters for {}", name(primary)));
  }

  ModelParams ModelParams::manual(Weight alpha, Weight beta_t, Weight beta_i) {
    return {alpha, beta_t, beta_i, Provenance::Manual};
  }

  TestFieldCoefficients test_field_coefficients(const ModelParams &params) {
    const auto alpha = params.alpha();
    const auto beta = params.beta_t();
    TestFieldCoefficients out{};
    out.opposite_test_units = beta.ppm() * alpha.complement_ppm();
    out.inducing_units = beta.ppm() * alpha.ppm();
    out.next_units = beta.complement_ppm() * Weight::kScale;
    out.opposite_test = units_to_double(out.opposite_test_units);
    out.inducing = units_to_double(out.inducing_units);
    out.next = units_to_double(out.next_units);
    return out;
  }

  ModelParams select_params(const StimulusSpec &spec) {
    const bool white_surround = classify_inducing(spec.inducing) == InducingClass::White;
    const auto beta_i = ppm(white_surround ? kBetaIWhitePpm : kBetaIChromaticPpm);
    if (white_surround && spec.next == spec.test) {
      for (const auto &c : kSpecialCases) {
        if (spec.test == to_rgb(c.primary)) {
          return ModelParams::special(c.primary, beta_i);
        }
      }
    }
    return ModelParams::defaults(beta_i);
  }

  Rgb modified_test_color(const StimulusSpec &spec, const ModelParams &params) {
    return mix(opposite(spec.inducing), spec.test, params.alpha().value());
  }

  Rgb afterimage_test_color(const StimulusSpec &spec, const ModelParams &params) {
    const auto k = test_field_coefficients(params);
    const auto opposite_test = opposite(spec.test);
    std::array<double, 3> out{};
    for (std::size_t ch = 0; ch < 3; ++ch) {
      out[ch] = k.opposite_test * opposite_test[ch] + k.inducing * spec.inducing[ch]
                + k.next * spec.next[ch];
    }
    return {out[0], out[1], out[2]};
  }

  Rgb afterimage_inducing_color(const StimulusSpec &spec, const ModelParams &params) {
    return mix(opposite(spec.inducing), spec.next, params.beta_i().value());
  }

  AfterimagePrediction predict(const StimulusSpec &spec, const ModelParams &params) {
    return {modified_test_color(spec, params), afterimage_test_color(spec, params),
            afterimage_inducing_color(spec, params), params};
  }

  AfterimagePrediction predict(const StimulusSpec &spec) {
    return predict(spec, select_params(spec));
  }

  std::string_view to_string(BaselineScheme scheme) {
    return scheme == BaselineScheme::Group1 ? "group1" : "group2";
  }

  BaselineScheme parse_scheme(std::string_view text) {
    const auto key = lower(text);
    if (key == "group1") {
      return BaselineScheme::Group1;
    }
    if (key == "group2") {
      return BaselineScheme::Group2;
    }
    throw std::invalid_argument(
        fmt::format("unknown baseline scheme '{}' (expected group1 or group2)", text));
  }

  Rgb complement(const Rgb &c, BaselineScheme scheme) {
    if (scheme == BaselineScheme::Group2) {
      return opposite(c);
    }
    static constexpr std::array<std::pair<Rgb, Rgb>, 3> kPairs{{
        {kRed, kGreen},
        {kYellow, kPurple},
        {kBlue, kOrange},
    }};
    for (const auto &[a, b] : kPairs) {
      if (c == a) {
        return b;
      }
      if (c == b) {
        return a;
      }
    }
    throw std::invalid_argument(fmt::format(
        "group1 complement is defined only for red, green, yellow, purple, blue and orange; "
        "got {}",
        to_string(c)));
  }

  BaselineColors complementary_baseline(const StimulusSpec &spec, BaselineScheme scheme) {
    return {scale(complement(spec.test, scheme), kBaselineDimming),
            scale(spec.next, kBaselineDimming)};
  }

}  // namespace afterimage
