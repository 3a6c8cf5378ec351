/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "afterimage/experiment/service.hpp"

#include <random>

#include <fmt/format.h>

namespace afterimage::experiment {

  namespace {

    std::string fresh_session_id() {
      std::random_device device;
      const std::uint64_t hi = device();
      const std::uint64_t lo = device();
      return fmt::format("s{:016x}", (hi << 32) ^ lo);
    }

    std::optional<Placement> shown_placement(const TrialState &s) {
      if (const auto *c = std::get_if<state::Choosing>(&s)) {
        return c->placement;
      }
      if (const auto *c = std::get_if<state::Completed>(&s)) {
        return c->placement;
      }
      return std::nullopt;
    }

  }  // namespace

  PanelKind parse_panel_kind(std::string_view text) {
    if (text == "stimulus") {
      return PanelKind::Stimulus;
    }
    if (text == "new" || text == "next") {
      return PanelKind::Next;
    }
    if (text == "left") {
      return PanelKind::Left;
    }
    if (text == "right") {
      return PanelKind::Right;
    }
    throw std::invalid_argument(
        fmt::format("unknown panel '{}' (expected stimulus, new, left or right)", text));
  }

  render::RasterImage render_trial_panel(const Session &session, std::size_t trial,
                                         PanelKind kind, const render::Geometry &g,
                                         const render::BlurSettings &blur) {
    const auto &spec = session.trials.at(trial);
    const auto &stimulus = spec.stimulus;
    switch (kind) {
      case PanelKind::Stimulus:
        return render::render_stimulus(g, stimulus.test, stimulus.inducing);
      case PanelKind::Next:
        return render::render_uniform(g, stimulus.next);
      case PanelKind::Left:
      case PanelKind::Right:
        break;
    }

    const auto placement = shown_placement(session.progress.at(trial).state);
    if (!placement) {
      return render::render_uniform(g, kPendingPanelGray);
    }
    const bool s1_here = (kind == PanelKind::Left) == (*placement == Placement::S1Left);
    if (s1_here) {
      const auto baseline = complementary_baseline(stimulus, spec.scheme);
      return render::render_afterimage_panel(g, baseline.test, baseline.inducing, blur);
    }
    const auto prediction = predict(stimulus);
    return render::render_afterimage_panel(g, prediction.afterimage_test,
                                           prediction.afterimage_inducing, blur);
  }

  ExperimentService::ExperimentService(ServiceConfig config)
      : config_(std::move(config)), log_(config_.log_path) {
    render::validate(config_.geometry);
    render::gaussian_kernel(config_.blur);
    for (auto &session : replay(EventLog::read(config_.log_path))) {
      auto s = std::make_shared<Slot>();
      s->session = std::move(session);
      creation_order_.push_back(s->session.id);
      slots_.emplace(s->session.id, std::move(s));
    }
  }

  std::shared_ptr<ExperimentService::Slot> ExperimentService::slot(
      const std::string &session_id) const {
    std::shared_lock lock(sessions_mutex_);
    const auto it = slots_.find(session_id);
    if (it == slots_.end()) {
      throw NotFoundError(fmt::format("unknown session '{}'", session_id));
    }
    return it->second;
  }

  void ExperimentService::commit(Slot &slot, const EventRecord &record) {
    // Validate against a copy first so a rejected record never reaches the log.
    Session next = slot.session;
    apply(next, record);
    log_.append(record);
    slot.session = std::move(next);
  }

  void ExperimentService::advance(Slot &slot, std::size_t trial, Timestamp now) {
    if (auto record = decide_advance(slot.session, trial, now, config_.timing_tolerance)) {
      commit(slot, *record);
    }
  }

  Session ExperimentService::create_session(const SessionRequest &request, Timestamp now,
                                            std::optional<std::string> session_id) {
    std::unique_lock lock(sessions_mutex_);
    std::string id = session_id.value_or(std::string{});
    if (id.empty()) {
      do {
        id = fresh_session_id();
      } while (slots_.contains(id));
    } else if (slots_.contains(id)) {
      throw StateError(fmt::format("session '{}' already exists", id));
    }
    const auto record = decide_create(id, request, now);
    auto s = std::make_shared<Slot>();
    s->session = session_from_record(record);
    log_.append(record);
    creation_order_.push_back(id);
    slots_.emplace(id, s);
    return s->session;
  }

  Session ExperimentService::session(const std::string &session_id) const {
    const auto s = slot(session_id);
    std::lock_guard lock(s->mutex);
    return s->session;
  }

  std::vector<Session> ExperimentService::sessions() const {
    std::vector<std::shared_ptr<Slot>> snapshot;
    {
      std::shared_lock lock(sessions_mutex_);
      for (const auto &id : creation_order_) {
        snapshot.push_back(slots_.at(id));
      }
    }
    std::vector<Session> out;
    out.reserve(snapshot.size());
    for (const auto &s : snapshot) {
      std::lock_guard lock(s->mutex);
      out.push_back(s->session);
    }
    return out;
  }

  TrialProgress ExperimentService::start_trial(const std::string &session_id,
                                               const std::string &trial_id, Timestamp now) {
    const auto s = slot(session_id);
    std::lock_guard lock(s->mutex);
    const auto trial = s->session.index_of(trial_id);
    // A trial whose adaptation already ran out is Choosing, not restartable.
    advance(*s, trial, now);
    commit(*s, decide_start(s->session, trial, now));
    return s->session.progress[trial];
  }

  TrialProgress ExperimentService::poll_trial(const std::string &session_id,
                                              const std::string &trial_id, Timestamp now) {
    const auto s = slot(session_id);
    std::lock_guard lock(s->mutex);
    const auto trial = s->session.index_of(trial_id);
    advance(*s, trial, now);
    return s->session.progress[trial];
  }

  TrialOutcome ExperimentService::submit_choice(const std::string &session_id,
                                                const std::string &trial_id, Choice choice,
                                                Timestamp now) {
    const auto s = slot(session_id);
    std::lock_guard lock(s->mutex);
    const auto trial = s->session.index_of(trial_id);
    advance(*s, trial, now);
    commit(*s, decide_choice(s->session, trial, choice, now));
    return std::get<state::Completed>(s->session.progress[trial].state).outcome;
  }

  TrialOutcome ExperimentService::submit_side(const std::string &session_id,
                                              const std::string &trial_id, Side side,
                                              Timestamp now) {
    const auto s = slot(session_id);
    std::lock_guard lock(s->mutex);
    const auto trial = s->session.index_of(trial_id);
    advance(*s, trial, now);
    const auto *choosing = std::get_if<state::Choosing>(&s->session.progress[trial].state);
    if (choosing == nullptr) {
      throw StateError(fmt::format("cannot submit a choice for trial {} of session {} while {}",
                                   trial_id, session_id,
                                   phase_name(s->session.progress[trial].state)));
    }
    const auto choice = choice_for_side(choosing->placement, side);
    commit(*s, decide_choice(s->session, trial, choice, now));
    return std::get<state::Completed>(s->session.progress[trial].state).outcome;
  }

  TrialProgress ExperimentService::redo_trial(const std::string &session_id,
                                              const std::string &trial_id, Timestamp now) {
    const auto s = slot(session_id);
    std::lock_guard lock(s->mutex);
    const auto trial = s->session.index_of(trial_id);
    advance(*s, trial, now);
    commit(*s, decide_redo(s->session, trial, now));
    return s->session.progress[trial];
  }

  render::RasterImage ExperimentService::trial_panel(const std::string &session_id,
                                                     const std::string &trial_id,
                                                     PanelKind kind) const {
    const auto snapshot = session(session_id);
    return render_trial_panel(snapshot, snapshot.index_of(trial_id), kind, config_.geometry,
                              config_.blur);
  }

  TrialPanels ExperimentService::trial_panels(const std::string &session_id,
                                              const std::string &trial_id) const {
    const auto snapshot = session(session_id);
    const auto trial = snapshot.index_of(trial_id);
    const auto panel = [&](PanelKind kind) {
      return render_trial_panel(snapshot, trial, kind, config_.geometry, config_.blur);
    };
    return {panel(PanelKind::Stimulus), panel(PanelKind::Next), panel(PanelKind::Left),
            panel(PanelKind::Right)};
  }

  ScoreTable ExperimentService::scores(std::optional<BaselineScheme> scheme) const {
    const auto all = sessions();
    if (!scheme) {
      return aggregate_scores(all);
    }
    return aggregate_scores(sessions_with_scheme(all, *scheme));
  }

  void ExperimentService::flush() {
    log_.flush();
  }

}  // namespace afterimage::experiment
