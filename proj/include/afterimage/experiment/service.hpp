/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "afterimage/experiment/events.hpp"
#include "afterimage/experiment/scores.hpp"
#include "afterimage/experiment/session.hpp"
#include "afterimage/render.hpp"

namespace afterimage::experiment {

  struct ServiceConfig {
    std::filesystem::path log_path{"events.jsonl"};
    render::Geometry geometry{};
    render::BlurSettings blur{};
    /// Allowed clock skew when deciding that adaptation has finished.
    std::chrono::milliseconds timing_tolerance{250};
  };

  enum class PanelKind { Stimulus, Next, Left, Right };

  /// Accepts "stimulus", "new", "left", "right". Throws std::invalid_argument.
  PanelKind parse_panel_kind(std::string_view text);

  inline constexpr Rgb kPendingPanelGray{0.5, 0.5, 0.5};

  struct TrialPanels {
    render::RasterImage stimulus;
    render::RasterImage next;
    render::RasterImage left;
    render::RasterImage right;
  };

  /// The panel images for one trial. Before the trial reaches Choosing both
  /// bottom panels are uniform gray; afterwards the blurred baseline (S1)
  /// and model prediction (S2) are placed according to the drawn placement.
  render::RasterImage render_trial_panel(const Session &session, std::size_t trial,
                                         PanelKind kind, const render::Geometry &g,
                                         const render::BlurSettings &blur);

  /**
   * Runs verification sessions. Every transition is appended to the event
   * log before it becomes visible, and the constructor rebuilds existing
   * sessions by replaying the log.
   *
   * Commands on one session are serialized; different sessions proceed in
   * parallel. Queries return snapshots.
   */
  class ExperimentService {
   public:
    explicit ExperimentService(ServiceConfig config);

    ExperimentService(const ExperimentService &) = delete;
    ExperimentService &operator=(const ExperimentService &) = delete;

    const ServiceConfig &config() const {
      return config_;
    }

    /// session_id defaults to a fresh random identifier.
    Session create_session(const SessionRequest &request, Timestamp now,
                           std::optional<std::string> session_id = std::nullopt);

    Session session(const std::string &session_id) const;
    std::vector<Session> sessions() const;

    TrialProgress start_trial(const std::string &session_id, const std::string &trial_id,
                              Timestamp now);
    /// Reports the current state, moving Adapting -> Choosing when due.
    TrialProgress poll_trial(const std::string &session_id, const std::string &trial_id,
                             Timestamp now);
    TrialOutcome submit_choice(const std::string &session_id, const std::string &trial_id,
                               Choice choice, Timestamp now);
    /// Maps a click on the left or right panel through the trial's placement.
    TrialOutcome submit_side(const std::string &session_id, const std::string &trial_id,
                             Side side, Timestamp now);
    TrialProgress redo_trial(const std::string &session_id, const std::string &trial_id,
                             Timestamp now);

    render::RasterImage trial_panel(const std::string &session_id, const std::string &trial_id,
                                    PanelKind kind) const;
    TrialPanels trial_panels(const std::string &session_id, const std::string &trial_id) const;

    /// All sessions, or only those using the given scheme.
    ScoreTable scores(std::optional<BaselineScheme> scheme = std::nullopt) const;

    void flush();

   private:
    struct Slot {
      mutable std::mutex mutex;
      Session session;
    };

    std::shared_ptr<Slot> slot(const std::string &session_id) const;
    /// Persists then applies; the caller holds the slot's mutex.
    void commit(Slot &slot, const EventRecord &record);
    void advance(Slot &slot, std::size_t trial, Timestamp now);

    ServiceConfig config_;
    EventLog log_;
    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Slot>> slots_;
    std::vector<std::string> creation_order_;
  };

}  // namespace afterimage::experiment
