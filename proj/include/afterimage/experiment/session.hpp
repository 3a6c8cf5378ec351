/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "afterimage/model.hpp"

namespace afterimage::experiment {

  using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

  inline constexpr std::chrono::milliseconds kDefaultAdaptation{20'000};

  /// Raised when a command is not valid in the trial's current state.
  class StateError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
  };

  /// Unknown session or trial id.
  class NotFoundError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  struct TrialSpec {
    std::string trial_id;
    StimulusSpec stimulus;
    BaselineScheme scheme{BaselineScheme::Group2};
    std::chrono::milliseconds adapt_duration{kDefaultAdaptation};

    friend bool operator==(const TrialSpec &, const TrialSpec &) = default;
  };

  /// The 3 x 5 grid: test in {R, G, B} x next in {W, K, R, G, B}, white
  /// surround throughout. Order is test-major; ids are "t01".."t15".
  std::vector<TrialSpec> build_battery(BaselineScheme scheme,
                                       std::chrono::milliseconds adapt_duration = kDefaultAdaptation);

  /// Deterministic Fisher-Yates permutation driven by the seed.
  void shuffle_battery(std::vector<TrialSpec> &trials, std::uint64_t seed);

  /// Which side the complementary baseline (S1) is shown on.
  enum class Placement { S1Left, S1Right };
  enum class Side { Left, Right };
  enum class Choice { PickedS1, PickedS2, AlmostSame };

  /// Placement for the index-th draw of a session's stream: the top bit of
  /// the index-th output of mt19937_64 seeded with the session seed.
  Placement placement_at(std::uint64_t seed, std::uint64_t index);

  Choice choice_for_side(Placement placement, Side side);

  struct TrialOutcome {
    Choice choice{Choice::AlmostSame};
    double s1_score{0.5};
    double s2_score{0.5};
    int redo_count{0};

    /// 1 to the picked panel and 0 to the other; 0.5 each for AlmostSame.
    static TrialOutcome score(Choice choice, int redo_count);

    friend bool operator==(const TrialOutcome &, const TrialOutcome &) = default;
  };

  namespace state {
    struct Idle {
      friend bool operator==(const Idle &, const Idle &) = default;
    };
    struct Adapting {
      Timestamp started_at;
      friend bool operator==(const Adapting &, const Adapting &) = default;
    };
    struct Choosing {
      Placement placement;
      friend bool operator==(const Choosing &, const Choosing &) = default;
    };
    struct Completed {
      TrialOutcome outcome;
      Placement placement;
      friend bool operator==(const Completed &, const Completed &) = default;
    };
  }  // namespace state

  using TrialState = std::variant<state::Idle, state::Adapting, state::Choosing, state::Completed>;

  std::string_view phase_name(const TrialState &s);

  struct TrialProgress {
    TrialState state{state::Idle{}};
    int redo_count{0};

    friend bool operator==(const TrialProgress &, const TrialProgress &) = default;
  };

  struct SubjectInfo {
    std::string label;
    std::string color_vision;

    friend bool operator==(const SubjectInfo &, const SubjectInfo &) = default;
  };

  struct Session {
    std::string id;
    SubjectInfo subject;
    BaselineScheme scheme{BaselineScheme::Group2};
    std::uint64_t seed{0};
    bool shuffled{false};
    Timestamp created_at{};
    std::vector<TrialSpec> trials;
    std::vector<TrialProgress> progress;
    /// Number of placements drawn so far from the session stream.
    std::uint64_t placement_draws{0};

    /// Throws NotFoundError.
    std::size_t index_of(std::string_view trial_id) const;
    std::size_t completed_count() const;

    friend bool operator==(const Session &, const Session &) = default;
  };

  std::string_view to_string(Placement p);
  std::string_view to_string(Choice c);
  Placement parse_placement(std::string_view text);
  Choice parse_choice(std::string_view text);

}  // namespace afterimage::experiment
