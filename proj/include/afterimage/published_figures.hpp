/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "afterimage/model.hpp"

namespace afterimage {

  /// One published comparison figure: the stimulus and the afterimage
  /// colors printed alongside it.
  struct FigureCase {
    std::string_view name;  ///< file prefix, e.g. "fig3_left"
    std::string_view caption;
    StimulusSpec spec;
    std::optional<Rgb> printed_test;      ///< printed C_AT
    std::optional<Rgb> printed_inducing;  ///< printed C_AI
    std::optional<Rgb> printed_baseline;  ///< printed C_CT
  };

  /// Figures 3 to 6, left then right. Rendered with the Group2 baseline.
  std::span<const FigureCase> published_figures();

  enum class Agreement { Match, Mismatch, NotPrinted };

  struct FigureCheck {
    const FigureCase *figure;
    AfterimagePrediction prediction;
    Agreement test_agreement;
    Agreement inducing_agreement;
    Agreement baseline_agreement;
    /// Closed-form test color recomputed with a white surround, for rows
    /// whose printed C_AT disagrees with the model.
    std::optional<Rgb> white_surround_test;
  };

  inline constexpr double kPrintedTolerance = 1e-6;

  FigureCheck check_figure(const FigureCase &figure);

  /// Plain-text table of model against printed values; mismatches are
  /// marked "DISCREPANCY".
  std::string format_figure_report(std::span<const FigureCheck> checks);

}  // namespace afterimage
