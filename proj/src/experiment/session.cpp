/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "afterimage/experiment/session.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <random>

#include <fmt/format.h>

namespace afterimage::experiment {

  namespace {
    constexpr std::uint64_t kShuffleStream = 0x9E3779B97F4A7C15ULL;
  }

  std::vector<TrialSpec> build_battery(BaselineScheme scheme,
                                       std::chrono::milliseconds adapt_duration) {
    if (adapt_duration.count() <= 0) {
      throw std::invalid_argument("adaptation period must be positive");
    }
    constexpr std::array tests{kRed, kGreen, kBlue};
    constexpr std::array nexts{kWhite, kBlack, kRed, kGreen, kBlue};
    std::vector<TrialSpec> out;
    out.reserve(tests.size() * nexts.size());
    for (const auto &test : tests) {
      for (const auto &next : nexts) {
        out.push_back({fmt::format("t{:02}", out.size() + 1), {test, kWhite, next}, scheme,
                       adapt_duration});
      }
    }
    return out;
  }

  void shuffle_battery(std::vector<TrialSpec> &trials, std::uint64_t seed) {
    // Hand-rolled so the permutation is identical across standard libraries.
    std::mt19937_64 engine(seed ^ kShuffleStream);
    for (std::size_t i = trials.size(); i > 1; --i) {
      const std::uint64_t bound = i;
      const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()
                                  - std::numeric_limits<std::uint64_t>::max() % bound;
      std::uint64_t draw = engine();
      while (draw >= limit) {
        draw = engine();
      }
      std::swap(trials[i - 1], trials[static_cast<std::size_t>(draw % bound)]);
    }
  }

  Placement placement_at(std::uint64_t seed, std::uint64_t index) {
    std::mt19937_64 engine(seed);
    engine.discard(index);
    return (engine() >> 63) != 0 ? Placement::S1Right : Placement::S1Left;
  }

  Choice choice_for_side(Placement placement, Side side) {
    const bool s1_on_left = placement == Placement::S1Left;
    const bool picked_left = side == Side::Left;
    return s1_on_left == picked_left ? Choice::PickedS1 : Choice::PickedS2;
  }

  TrialOutcome TrialOutcome::score(Choice choice, int redo_count) {
    switch (choice) {
      case Choice::PickedS1:
        return {choice, 1.0, 0.0, redo_count};
      case Choice::PickedS2:
        return {choice, 0.0, 1.0, redo_count};
      case Choice::AlmostSame:
        break;
    }
    return {Choice::AlmostSame, 0.5, 0.5, redo_count};
  }

  std::string_view phase_name(const TrialState &s) {
    constexpr std::array<std::string_view, 4> kNames{"idle", "adapting", "choosing", "completed"};
    return kNames[s.index()];
  }

  std::size_t Session::index_of(std::string_view trial_id) const {
    for (std::size_t i = 0; i < trials.size(); ++i) {
      if (trials[i].trial_id == trial_id) {
        return i;
      }
    }
    throw NotFoundError(fmt::format("session {} has no trial '{}'", id, trial_id));
  }

  std::size_t Session::completed_count() const {
    return static_cast<std::size_t>(std::count_if(progress.begin(), progress.end(), [](const auto &p) {
      return std::holds_alternative<state::Completed>(p.state);
    }));
  }

  std::string_view to_string(Placement p) {
    return p == Placement::S1Left ? "s1_left" : "s1_right";
  }

  std::string_view to_string(Choice c) {
    switch (c) {
      case Choice::PickedS1:
        return "picked_s1";
      case Choice::PickedS2:
        return "picked_s2";
      case Choice::AlmostSame:
        return "almost_same";
    }
    return "?";
  }

  Placement parse_placement(std::string_view text) {
    if (text == "s1_left") {
      return Placement::S1Left;
    }
    if (text == "s1_right") {
      return Placement::S1Right;
    }
    throw std::invalid_argument(fmt::format("unknown placement '{}'", text));
  }

  Choice parse_choice(std::string_view text) {
    if (text == "picked_s1" || text == "s1") {
      return Choice::PickedS1;
    }
    if (text == "picked_s2" || text == "s2") {
      return Choice::PickedS2;
    }
    if (text == "almost_same") {
      return Choice::AlmostSame;
    }
    throw std::invalid_argument(fmt::format("unknown choice '{}'", text));
  }

}  // namespace afterimage::experiment
