/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "afterimage/published_figures.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

namespace afterimage {

  namespace {

    // Reproduction manifest. Printed values are copied verbatim from the
    // figure captions and surrounding text.
    const std::array<FigureCase, 8> kFigures{{
        {"fig3_left", "red circle, white surround, new color white", {kRed, kWhite, kWhite},
         Rgb{0.76, 1, 1}, std::nullopt, Rgb{0, 0.9, 0.9}},
        {"fig3_right", "red circle, white surround, new color black", {kRed, kWhite, kBlack},
         Rgb{0.16, 0.4, 0.4}, std::nullopt, std::nullopt},
        {"fig4_left", "red circle, white surround, new color green", {kRed, kWhite, kGreen},
         Rgb{0.16, 1, 0.4}, std::nullopt, Rgb{0, 0.9, 0.9}},
        {"fig4_right", "red circle, white surround, new color blue", {kRed, kWhite, kBlue},
         Rgb{0.16, 0.4, 1}, std::nullopt, std::nullopt},
        {"fig5_left", "red circle, white surround, new color red", {kRed, kWhite, kRed},
         Rgb{0.86, 0.35, 0.35}, std::nullopt, std::nullopt},
        {"fig5_right", "green circle, white surround, new color green", {kGreen, kWhite, kGreen},
         Rgb{0.45, 0.8875, 0.45}, std::nullopt, Rgb{0.9, 0, 0.9}},
        {"fig6_left", "red circle, green surround, new color yellow", {kRed, kGreen, kYellow},
         Rgb{0.76, 1.0, 0.4}, Rgb{1.0, 0.8, 0.2}, std::nullopt},
        {"fig6_right", "blue circle, red surround, new color magenta", {kBlue, kRed, kMagenta},
         Rgb{1.0, 0.4, 0.76}, Rgb{0.8, 0.2, 1.0}, std::nullopt},
    }};

    Agreement compare(const Rgb &model, const std::optional<Rgb> &printed) {
      if (!printed) {
        return Agreement::NotPrinted;
      }
      for (std::size_t ch = 0; ch < 3; ++ch) {
        if (std::abs(model[ch] - (*printed)[ch]) > kPrintedTolerance) {
          return Agreement::Mismatch;
        }
      }
      return Agreement::Match;
    }

    std::string status(Agreement a) {
      switch (a) {
        case Agreement::Match:
          return "match";
        case Agreement::Mismatch:
          return "DISCREPANCY";
        case Agreement::NotPrinted:
          break;
      }
      return "-";
    }

  }  // namespace

  std::span<const FigureCase> published_figures() {
    return kFigures;
  }

  FigureCheck check_figure(const FigureCase &figure) {
    FigureCheck check{&figure, predict(figure.spec), Agreement::NotPrinted,
                      Agreement::NotPrinted, Agreement::NotPrinted, std::nullopt};
    check.test_agreement = compare(check.prediction.afterimage_test, figure.printed_test);
    check.inducing_agreement = compare(check.prediction.afterimage_inducing, figure.printed_inducing);
    const auto baseline = complementary_baseline(figure.spec, BaselineScheme::Group2);
    check.baseline_agreement = compare(baseline.test, figure.printed_baseline);
    if (check.test_agreement == Agreement::Mismatch) {
      const StimulusSpec white_surround{figure.spec.test, kWhite, figure.spec.next};
      check.white_surround_test = afterimage_test_color(white_surround, check.prediction.params);
    }
    return check;
  }

  std::string format_figure_report(std::span<const FigureCheck> checks) {
    std::string out = fmt::format("{:<11} {:<5} {:<24} {:<24} {}\n", "figure", "field", "model",
                                  "printed", "status");
    for (const auto &c : checks) {
      const auto &f = *c.figure;
      const auto &params = c.prediction.params;
      out += fmt::format("{:<11} {} (alpha={:g}, beta_t={:g}, beta_i={:g}, {})\n", f.name,
                         f.caption, params.alpha().value(), params.beta_t().value(),
                         params.beta_i().value(), to_string(params.provenance()));

      const auto row = [&](std::string_view field, const Rgb &model,
                           const std::optional<Rgb> &printed, Agreement agreement) {
        out += fmt::format("{:<11} {:<5} {:<24} {:<24} {}\n", "", field, to_string(model),
                           printed ? to_string(*printed) : "-", status(agreement));
      };
      row("C_AT", c.prediction.afterimage_test, f.printed_test, c.test_agreement);
      row("C_AI", c.prediction.afterimage_inducing, f.printed_inducing, c.inducing_agreement);
      row("C_CT", complementary_baseline(f.spec, BaselineScheme::Group2).test, f.printed_baseline,
          c.baseline_agreement);
      if (c.white_surround_test) {
        out += fmt::format(
            "{:<11} note: printed C_AT is not reproduced by the closed form with C_OI = {}; the "
            "same formula with a white surround gives {}\n",
            "", to_string(f.spec.inducing), to_string(*c.white_surround_test));
      }
    }
    return out;
  }

}  // namespace afterimage
