/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "afterimage/experiment/session.hpp"

namespace afterimage::experiment {

  struct ScoreCell {
    Rgb test;
    Rgb next;
    double s1_total{0.0};
    double s2_total{0.0};
    int completed{0};

    friend bool operator==(const ScoreCell &, const ScoreCell &) = default;
  };

  /// Score totals keyed by (test color, new color). The fifteen battery cells
  /// are always present, in battery order; any other cells follow in order
  /// of first appearance.
  struct ScoreTable {
    std::vector<ScoreCell> cells;

    /// Throws NotFoundError.
    const ScoreCell &cell(const Rgb &test, const Rgb &next) const;

    friend bool operator==(const ScoreTable &, const ScoreTable &) = default;
  };

  ScoreTable aggregate_scores(std::span<const Session> sessions);

  /// Sessions restricted to one baseline scheme.
  std::vector<Session> sessions_with_scheme(std::span<const Session> sessions,
                                            BaselineScheme scheme);

  /// Rows per test color (S1 then S2), one column per new color.
  std::string format_score_table(const ScoreTable &table);

  nlohmann::json to_json(const ScoreTable &table);

}  // namespace afterimage::experiment
