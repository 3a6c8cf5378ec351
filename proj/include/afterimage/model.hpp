/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <string_view>
#include <utility>

#include "afterimage/color.hpp"

namespace afterimage {

  /// The colors that define one adaptation trial.
  struct StimulusSpec {
    Rgb test;      ///< original color of the circular test field
    Rgb inducing;  ///< original color of the rectangular surround
    Rgb next;      ///< uniform color viewed after adaptation

    friend bool operator==(const StimulusSpec &, const StimulusSpec &) = default;
  };

  /**
   * A mixing weight strictly inside (0, 1), held as an exact number of
   * parts per million. Products of two weights are then exact integers,
   * so derived coefficients such as 0.4 * 0.4 come out as the double
   * nearest to 0.16 rather than 0.16000000000000003.
   */
  class Weight {
   public:
    static constexpr std::int64_t kScale = 1'000'000;

    /// Throws std::invalid_argument unless 0 < ppm < kScale.
    static Weight from_ppm(std::int64_t ppm);

    /// Throws std::invalid_argument unless value lies strictly inside (0, 1)
    /// and is a whole number of millionths (to within 1e-9).
    static Weight from_double(double value);

    constexpr std::int64_t ppm() const {
      return ppm_;
    }
    constexpr std::int64_t complement_ppm() const {
      return kScale - ppm_;
    }
    double value() const {
      return static_cast<double>(ppm_) / static_cast<double>(kScale);
    }
    double complement() const {
      return static_cast<double>(complement_ppm()) / static_cast<double>(kScale);
    }

    friend constexpr bool operator==(Weight, Weight) = default;

   private:
    constexpr explicit Weight(std::int64_t ppm) : ppm_(ppm) {}

    std::int64_t ppm_;
  };

  enum class Provenance { Default, SpecialRed, SpecialGreen, SpecialBlue, Manual };

  std::string_view to_string(Provenance provenance);

  /// alpha weights the surround's opposite color against the test color;
  /// beta_t and beta_i weight the induced opposite colors against the new
  /// stimulating color in the test and inducing fields.
  class ModelParams {
   public:
    /// alpha = 0.4, beta_t = 0.4.
    static ModelParams defaults(Weight beta_i);
    /// Parameters tuned for a white surround with next == test primary.
    static ModelParams special(NamedColor primary, Weight beta_i);
    static ModelParams manual(Weight alpha, Weight beta_t, Weight beta_i);

    Weight alpha() const {
      return alpha_;
    }
    Weight beta_t() const {
      return beta_t_;
    }
    Weight beta_i() const {
      return beta_i_;
    }
    Provenance provenance() const {
      return provenance_;
    }

    friend bool operator==(const ModelParams &, const ModelParams &) = default;

   private:
    ModelParams(Weight alpha, Weight beta_t, Weight beta_i, Provenance provenance)
        : alpha_(alpha), beta_t_(beta_t), beta_i_(beta_i), provenance_(provenance) {}

    Weight alpha_;
    Weight beta_t_;
    Weight beta_i_;
    Provenance provenance_;
  };

  /// Weights of the closed-form test-field color:
  ///   C_AT = opposite_test * (1 - C_OT) + inducing * C_OI + next * C_N
  /// with opposite_test = beta_t (1 - alpha), inducing = beta_t alpha,
  /// next = 1 - beta_t.
  struct TestFieldCoefficients {
    double opposite_test;
    double inducing;
    double next;
    /// The same three weights in units of 1e-12; they always sum to 1e12.
    std::int64_t opposite_test_units;
    std::int64_t inducing_units;
    std::int64_t next_units;
  };

  TestFieldCoefficients test_field_coefficients(const ModelParams &params);

  struct AfterimagePrediction {
    Rgb modified_test;    ///< test color after simultaneous contrast
    Rgb afterimage_test;  ///< afterimage color in the test field
    Rgb afterimage_inducing;
    ModelParams params;
  };

  /// Tuned parameters when the surround is white and the new color repeats
  /// a primary test color; alpha = beta_t = 0.4 otherwise. beta_i is 0.1 for
  /// a white surround and 0.2 for anything else (gray and black included).
  ModelParams select_params(const StimulusSpec &spec);

  /// Simultaneous contrast: alpha * (1 - C_OI) + (1 - alpha) * C_OT.
  Rgb modified_test_color(const StimulusSpec &spec, const ModelParams &params);

  /// Closed-form successive contrast in the test field.
  Rgb afterimage_test_color(const StimulusSpec &spec, const ModelParams &params);

  /// beta_i * (1 - C_OI) + (1 - beta_i) * C_N.
  Rgb afterimage_inducing_color(const StimulusSpec &spec, const ModelParams &params);

  AfterimagePrediction predict(const StimulusSpec &spec);
  AfterimagePrediction predict(const StimulusSpec &spec, const ModelParams &params);

  /// How the traditional complementary afterimage is formed.
  enum class BaselineScheme {
    Group1,  ///< red-green, yellow-purple, blue-orange pairs
    Group2,  ///< opposite colors, 1 - C
  };

  std::string_view to_string(BaselineScheme scheme);
  /// Accepts "group1" / "group2" (case-insensitive). Throws std::invalid_argument.
  BaselineScheme parse_scheme(std::string_view text);

  inline constexpr Rgb kPurple{0.5, 0.0, 0.5};
  inline constexpr Rgb kOrange{1.0, 0.5, 0.0};

  /// Complement of c under the given scheme. Group1 is defined only on
  /// red, green, yellow, purple, blue and orange; other colors throw
  /// std::invalid_argument.
  Rgb complement(const Rgb &c, BaselineScheme scheme);

  struct BaselineColors {
    Rgb test;      ///< 0.9 * complement(C_OT)
    Rgb inducing;  ///< 0.9 * C_N
  };

  inline constexpr double kBaselineDimming = 0.9;

  BaselineColors complementary_baseline(const StimulusSpec &spec, BaselineScheme scheme);

}  // namespace afterimage
