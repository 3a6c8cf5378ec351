/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "afterimage/experiment/session.hpp"

namespace afterimage::experiment {

  /**
   * One state transition. Sessions are rebuilt by applying records in log
   * order; see docs/event-log.md for the line format.
   */
  enum class RecordType {
    SessionCreated,
    TrialStarted,
    ChoosingEntered,
    ChoiceSubmitted,
    TrialRedone,
  };

  std::string_view to_string(RecordType type);
  RecordType parse_record_type(std::string_view text);

  struct EventRecord {
    RecordType type{RecordType::SessionCreated};
    std::string session_id;
    std::string trial_id;  ///< empty for session-level records
    Timestamp timestamp{};
    nlohmann::json payload = nlohmann::json::object();
  };

  nlohmann::json to_json(const EventRecord &record);
  /// Throws std::invalid_argument on a malformed record.
  EventRecord record_from_json(const nlohmann::json &j);

  nlohmann::json to_json(const Rgb &c);
  Rgb rgb_from_json(const nlohmann::json &j);

  /// Parameters fixed when a session is created.
  struct SessionRequest {
    BaselineScheme scheme{BaselineScheme::Group2};
    std::uint64_t seed{0};
    SubjectInfo subject;
    bool shuffle{false};
    std::chrono::milliseconds adapt_duration{kDefaultAdaptation};
  };

  // Command side of the trial state machine. Each function validates the
  // command against the current session and returns the records it
  // produces without changing anything; apply() performs the transition.

  EventRecord decide_create(const std::string &session_id, const SessionRequest &request,
                            Timestamp now);

  /// Adapting -> Choosing once the adaptation period (less the allowed
  /// skew) has elapsed; otherwise no record.
  std::optional<EventRecord> decide_advance(const Session &session, std::size_t trial,
                                            Timestamp now, std::chrono::milliseconds tolerance);

  /// Idle or Adapting -> Adapting (restarting the clock).
  EventRecord decide_start(const Session &session, std::size_t trial, Timestamp now);

  /// Choosing -> Completed.
  EventRecord decide_choice(const Session &session, std::size_t trial, Choice choice,
                            Timestamp now);

  /// Choosing -> Adapting with redo_count + 1.
  EventRecord decide_redo(const Session &session, std::size_t trial, Timestamp now);

  /// Builds the initial session from a SessionCreated record.
  Session session_from_record(const EventRecord &record);

  /// Applies a transition record. Throws StateError if the transition is
  /// not permitted from the current state, so a corrupt log cannot replay.
  void apply(Session &session, const EventRecord &record);

  /// Rebuilds all sessions from records, in first-creation order.
  std::vector<Session> replay(const std::vector<EventRecord> &records);

  /// Append-only line-delimited JSON log. Every append is flushed before
  /// returning.
  class EventLog {
   public:
    explicit EventLog(std::filesystem::path path);

    void append(const EventRecord &record);
    void flush();

    const std::filesystem::path &path() const {
      return path_;
    }

    /// Missing file yields no records. Blank lines are ignored. Throws
    /// std::runtime_error on unreadable files and std::invalid_argument
    /// (with the line number) on malformed lines.
    static std::vector<EventRecord> read(const std::filesystem::path &path);

   private:
    std::filesystem::path path_;
    std::mutex mutex_;
    std::ofstream out_;
  };

}  // namespace afterimage::experiment
