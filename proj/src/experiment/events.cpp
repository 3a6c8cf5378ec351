/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "afterimage/experiment/events.hpp"

#include <array>
#include <unordered_map>
#include <utility>

#include <fmt/format.h>

namespace afterimage::experiment {

  using nlohmann::json;

  namespace {

    constexpr std::array<std::pair<RecordType, std::string_view>, 5> kRecordNames{{
        {RecordType::SessionCreated, "session_created"},
        {RecordType::TrialStarted, "trial_started"},
        {RecordType::ChoosingEntered, "choosing_entered"},
        {RecordType::ChoiceSubmitted, "choice_submitted"},
        {RecordType::TrialRedone, "trial_redone"},
    }};

    EventRecord trial_record(RecordType type, const Session &session, std::size_t trial,
                             Timestamp now, json payload = json::object()) {
      return {type, session.id, session.trials.at(trial).trial_id, now, std::move(payload)};
    }

    [[noreturn]] void reject(const Session &session, std::size_t trial, std::string_view command) {
      throw StateError(fmt::format("cannot {} trial {} of session {} while {}", command,
                                   session.trials[trial].trial_id, session.id,
                                   phase_name(session.progress[trial].state)));
    }

    void check_trial_index(const Session &session, std::size_t trial) {
      if (trial >= session.trials.size()) {
        throw NotFoundError(fmt::format("session {} has no trial #{}", session.id, trial));
      }
    }

    json trial_to_json(const TrialSpec &t) {
      return {{"trial_id", t.trial_id},
              {"test", to_json(t.stimulus.test)},
              {"inducing", to_json(t.stimulus.inducing)},
              {"next", to_json(t.stimulus.next)},
              {"scheme", to_string(t.scheme)},
              {"adapt_ms", t.adapt_duration.count()}};
    }

    TrialSpec trial_from_json(const json &j) {
      TrialSpec t;
      t.trial_id = j.at("trial_id").get<std::string>();
      t.stimulus = {rgb_from_json(j.at("test")), rgb_from_json(j.at("inducing")),
                    rgb_from_json(j.at("next"))};
      t.scheme = parse_scheme(j.at("scheme").get<std::string>());
      t.adapt_duration = std::chrono::milliseconds(j.at("adapt_ms").get<std::int64_t>());
      if (t.adapt_duration.count() <= 0) {
        throw std::invalid_argument("adapt_ms must be positive");
      }
      return t;
    }

  }  // namespace

  std::string_view to_string(RecordType type) {
    for (const auto &[t, n] : kRecordNames) {
      if (t == type) {
        return n;
      }
    }
    return "?";
  }

  RecordType parse_record_type(std::string_view text) {
    for (const auto &[t, n] : kRecordNames) {
      if (n == text) {
        return t;
      }
    }
    throw std::invalid_argument(fmt::format("unknown record_type '{}'", text));
  }

  json to_json(const Rgb &c) {
    return json::array({c.r(), c.g(), c.b()});
  }

  Rgb rgb_from_json(const json &j) {
    if (!j.is_array() || j.size() != 3) {
      throw std::invalid_argument("color must be a [r, g, b] array");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  }

  json to_json(const EventRecord &record) {
    return {{"record_type", to_string(record.type)},
            {"session_id", record.session_id},
            {"trial_id", record.trial_id.empty() ? json(nullptr) : json(record.trial_id)},
            {"timestamp", record.timestamp.time_since_epoch().count()},
            {"payload", record.payload}};
  }

  EventRecord record_from_json(const json &j) {
    try {
      EventRecord r;
      r.type = parse_record_type(j.at("record_type").get<std::string>());
      r.session_id = j.at("session_id").get<std::string>();
      const auto &tid = j.at("trial_id");
      r.trial_id = tid.is_null() ? std::string{} : tid.get<std::string>();
      r.timestamp = Timestamp(std::chrono::milliseconds(j.at("timestamp").get<std::int64_t>()));
      r.payload = j.at("payload");
      if (!r.payload.is_object()) {
        throw std::invalid_argument("payload must be an object");
      }
      if ((r.type == RecordType::SessionCreated) != r.trial_id.empty()) {
        throw std::invalid_argument("trial_id must be null exactly for session_created");
      }
      return r;
    } catch (const json::exception &e) {
      throw std::invalid_argument(fmt::format("malformed event record: {}", e.what()));
    }
  }

  EventRecord decide_create(const std::string &session_id, const SessionRequest &request,
                            Timestamp now) {
    auto trials = build_battery(request.scheme, request.adapt_duration);
    if (request.shuffle) {
      shuffle_battery(trials, request.seed);
    }
    json trial_list = json::array();
    for (const auto &t : trials) {
      trial_list.push_back(trial_to_json(t));
    }
    json payload = {{"scheme", to_string(request.scheme)},
                    {"seed", request.seed},
                    {"shuffled", request.shuffle},
                    {"subject",
                     {{"label", request.subject.label},
                      {"color_vision", request.subject.color_vision}}},
                    {"trials", std::move(trial_list)}};
    return {RecordType::SessionCreated, session_id, {}, now, std::move(payload)};
  }

  std::optional<EventRecord> decide_advance(const Session &session, std::size_t trial,
                                            Timestamp now, std::chrono::milliseconds tolerance) {
    check_trial_index(session, trial);
    const auto *adapting = std::get_if<state::Adapting>(&session.progress[trial].state);
    if (adapting == nullptr) {
      return std::nullopt;
    }
    if (now - adapting->started_at + tolerance < session.trials[trial].adapt_duration) {
      return std::nullopt;
    }
    const auto index = session.placement_draws;
    return trial_record(RecordType::ChoosingEntered, session, trial, now,
                        {{"placement", to_string(placement_at(session.seed, index))},
                         {"draw_index", index}});
  }

  EventRecord decide_start(const Session &session, std::size_t trial, Timestamp now) {
    check_trial_index(session, trial);
    const auto &s = session.progress[trial].state;
    if (!std::holds_alternative<state::Idle>(s) && !std::holds_alternative<state::Adapting>(s)) {
      reject(session, trial, "start");
    }
    return trial_record(RecordType::TrialStarted, session, trial, now);
  }

  EventRecord decide_choice(const Session &session, std::size_t trial, Choice choice,
                            Timestamp now) {
    check_trial_index(session, trial);
    if (!std::holds_alternative<state::Choosing>(session.progress[trial].state)) {
      reject(session, trial, "submit a choice for");
    }
    const auto outcome = TrialOutcome::score(choice, session.progress[trial].redo_count);
    return trial_record(RecordType::ChoiceSubmitted, session, trial, now,
                        {{"choice", to_string(outcome.choice)},
                         {"s1_score", outcome.s1_score},
                         {"s2_score", outcome.s2_score},
                         {"redo_count", outcome.redo_count}});
  }

  EventRecord decide_redo(const Session &session, std::size_t trial, Timestamp now) {
    check_trial_index(session, trial);
    if (!std::holds_alternative<state::Choosing>(session.progress[trial].state)) {
      reject(session, trial, "redo");
    }
    return trial_record(RecordType::TrialRedone, session, trial, now,
                        {{"redo_count", session.progress[trial].redo_count + 1}});
  }

  Session session_from_record(const EventRecord &record) {
    if (record.type != RecordType::SessionCreated) {
      throw StateError(fmt::format("session {} has no session_created record", record.session_id));
    }
    try {
      const auto &p = record.payload;
      Session s;
      s.id = record.session_id;
      s.scheme = parse_scheme(p.at("scheme").get<std::string>());
      s.seed = p.at("seed").get<std::uint64_t>();
      s.shuffled = p.at("shuffled").get<bool>();
      s.subject.label = p.at("subject").at("label").get<std::string>();
      s.subject.color_vision = p.at("subject").at("color_vision").get<std::string>();
      s.created_at = record.timestamp;
      for (const auto &t : p.at("trials")) {
        s.trials.push_back(trial_from_json(t));
      }
      s.progress.resize(s.trials.size());
      return s;
    } catch (const json::exception &e) {
      throw std::invalid_argument(
          fmt::format("malformed session_created payload for {}: {}", record.session_id, e.what()));
    }
  }

  void apply(Session &session, const EventRecord &record) {
    if (record.session_id != session.id) {
      throw std::invalid_argument(fmt::format("record for session {} applied to session {}",
                                              record.session_id, session.id));
    }
    if (record.type == RecordType::SessionCreated) {
      throw StateError(fmt::format("session {} created twice", session.id));
    }
    const auto trial = session.index_of(record.trial_id);
    auto &progress = session.progress[trial];

    try {
      switch (record.type) {
        case RecordType::TrialStarted:
          if (!std::holds_alternative<state::Idle>(progress.state)
              && !std::holds_alternative<state::Adapting>(progress.state)) {
            reject(session, trial, "start");
          }
          progress.state = state::Adapting{record.timestamp};
          break;

        case RecordType::ChoosingEntered: {
          if (!std::holds_alternative<state::Adapting>(progress.state)) {
            reject(session, trial, "enter choosing for");
          }
          const auto index = record.payload.at("draw_index").get<std::uint64_t>();
          const auto placement = parse_placement(record.payload.at("placement").get<std::string>());
          if (index != session.placement_draws || placement != placement_at(session.seed, index)) {
            throw StateError(fmt::format(
                "placement record for {} / {} does not match the session's placement stream",
                session.id, record.trial_id));
          }
          ++session.placement_draws;
          progress.state = state::Choosing{placement};
          break;
        }

        case RecordType::ChoiceSubmitted: {
          const auto *choosing = std::get_if<state::Choosing>(&progress.state);
          if (choosing == nullptr) {
            reject(session, trial, "submit a choice for");
          }
          const auto choice = parse_choice(record.payload.at("choice").get<std::string>());
          const auto outcome = TrialOutcome::score(choice, progress.redo_count);
          if (record.payload.at("s1_score").get<double>() != outcome.s1_score
              || record.payload.at("s2_score").get<double>() != outcome.s2_score
              || record.payload.at("redo_count").get<int>() != outcome.redo_count) {
            throw StateError(fmt::format("inconsistent scores recorded for {} / {}", session.id,
                                         record.trial_id));
          }
          progress.state = state::Completed{outcome, choosing->placement};
          break;
        }

        case RecordType::TrialRedone:
          if (!std::holds_alternative<state::Choosing>(progress.state)) {
            reject(session, trial, "redo");
          }
          if (record.payload.at("redo_count").get<int>() != progress.redo_count + 1) {
            throw StateError(fmt::format("inconsistent redo count recorded for {} / {}",
                                         session.id, record.trial_id));
          }
          ++progress.redo_count;
          progress.state = state::Adapting{record.timestamp};
          break;

        case RecordType::SessionCreated:
          break;
      }
    } catch (const json::exception &e) {
      throw std::invalid_argument(fmt::format("malformed {} payload for {} / {}: {}",
                                              to_string(record.type), session.id, record.trial_id,
                                              e.what()));
    }
  }

  std::vector<Session> replay(const std::vector<EventRecord> &records) {
    std::vector<Session> sessions;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto &r : records) {
      if (r.type == RecordType::SessionCreated) {
        if (index.contains(r.session_id)) {
          throw StateError(fmt::format("session {} created twice", r.session_id));
        }
        index.emplace(r.session_id, sessions.size());
        sessions.push_back(session_from_record(r));
        continue;
      }
      const auto it = index.find(r.session_id);
      if (it == index.end()) {
        throw StateError(fmt::format("record for unknown session {}", r.session_id));
      }
      apply(sessions[it->second], r);
    }
    return sessions;
  }

  EventLog::EventLog(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.has_parent_path()) {
      std::filesystem::create_directories(path_.parent_path());
    }
    out_.open(path_, std::ios::out | std::ios::app);
    if (!out_) {
      throw std::runtime_error(fmt::format("cannot open event log {}", path_.string()));
    }
  }

  void EventLog::append(const EventRecord &record) {
    const auto line = to_json(record).dump();
    std::lock_guard lock(mutex_);
    out_ << line << '\n';
    out_.flush();
    if (!out_) {
      throw std::runtime_error(fmt::format("failed to append to event log {}", path_.string()));
    }
  }

  void EventLog::flush() {
    std::lock_guard lock(mutex_);
    out_.flush();
  }

  std::vector<EventRecord> EventLog::read(const std::filesystem::path &path) {
    std::vector<EventRecord> records;
    if (!std::filesystem::exists(path)) {
      return records;
    }
    if (!std::filesystem::is_regular_file(path)) {
      throw std::runtime_error(fmt::format("event log {} is not a regular file", path.string()));
    }
    std::ifstream in(path);
    if (!in) {
      throw std::runtime_error(fmt::format("cannot read event log {}", path.string()));
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) {
        continue;
      }
      try {
        records.push_back(record_from_json(json::parse(line)));
      } catch (const std::exception &e) {
        throw std::invalid_argument(
            fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
      }
    }
    return records;
  }

}  // namespace afterimage::experiment
