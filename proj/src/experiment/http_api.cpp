/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "afterimage/experiment/http_api.hpp"

#include <httplib.h>

#include <fmt/format.h>

#include "afterimage/png.hpp"

namespace afterimage::experiment {

  using nlohmann::json;

  namespace {

    constexpr const char *kJson = "application/json";

    void send_json(httplib::Response &res, const json &body, int status = 200) {
      res.status = status;
      res.set_content(body.dump(), kJson);
    }

    void send_error(httplib::Response &res, int status, std::string_view message) {
      send_json(res, {{"error", message}}, status);
    }

    /// Runs a handler, translating domain exceptions into status codes.
    template <typename Fn>
    httplib::Server::Handler guarded(Fn fn) {
      return [fn = std::move(fn)](const httplib::Request &req, httplib::Response &res) {
        try {
          fn(req, res);
        } catch (const NotFoundError &e) {
          send_error(res, 404, e.what());
        } catch (const StateError &e) {
          send_error(res, 409, e.what());
        } catch (const std::invalid_argument &e) {
          send_error(res, 400, e.what());
        } catch (const json::exception &e) {
          send_error(res, 400, e.what());
        } catch (const std::exception &e) {
          send_error(res, 500, e.what());
        }
      };
    }

    json parse_body(const httplib::Request &req) {
      if (req.body.empty()) {
        return json::object();
      }
      auto body = json::parse(req.body);
      if (!body.is_object()) {
        throw std::invalid_argument("request body must be a JSON object");
      }
      return body;
    }

    SessionRequest session_request_from_json(const json &body) {
      SessionRequest r;
      r.scheme = parse_scheme(body.value("scheme", std::string{"group2"}));
      r.seed = body.value("seed", std::uint64_t{0});
      r.shuffle = body.value("shuffle", false);
      if (body.contains("subject")) {
        const auto &subject = body.at("subject");
        r.subject.label = subject.value("label", std::string{});
        r.subject.color_vision = subject.value("color_vision", std::string{});
      }
      if (body.contains("adapt_ms")) {
        r.adapt_duration = std::chrono::milliseconds(body.at("adapt_ms").get<std::int64_t>());
      }
      return r;
    }

    json state_json(const TrialState &s, const TrialSpec &spec, std::optional<Timestamp> now) {
      json j = {{"phase", phase_name(s)}};
      if (const auto *a = std::get_if<state::Adapting>(&s)) {
        j["started_at"] = a->started_at.time_since_epoch().count();
        if (now) {
          const auto remaining = spec.adapt_duration - (*now - a->started_at);
          j["remaining_ms"] = std::max<std::int64_t>(0, remaining.count());
        }
      } else if (const auto *c = std::get_if<state::Choosing>(&s)) {
        j["placement"] = to_string(c->placement);
      } else if (const auto *d = std::get_if<state::Completed>(&s)) {
        j["placement"] = to_string(d->placement);
        j["outcome"] = to_json(d->outcome);
      }
      return j;
    }

  }  // namespace

  Timestamp system_now() {
    return std::chrono::time_point_cast<std::chrono::milliseconds>(
        std::chrono::system_clock::now());
  }

  json to_json(const TrialOutcome &outcome) {
    return {{"choice", to_string(outcome.choice)},
            {"s1_score", outcome.s1_score},
            {"s2_score", outcome.s2_score},
            {"redo_count", outcome.redo_count}};
  }

  json to_json(const TrialSpec &spec, const TrialProgress &progress,
               std::optional<Timestamp> now) {
    json j = {{"trial_id", spec.trial_id},
              {"test", to_json(spec.stimulus.test)},
              {"inducing", to_json(spec.stimulus.inducing)},
              {"next", to_json(spec.stimulus.next)},
              {"adapt_ms", spec.adapt_duration.count()},
              {"redo_count", progress.redo_count}};
    j.update(state_json(progress.state, spec, now));
    return j;
  }

  json to_json(const Session &session, std::optional<Timestamp> now) {
    json trials = json::array();
    for (std::size_t i = 0; i < session.trials.size(); ++i) {
      trials.push_back(to_json(session.trials[i], session.progress[i], now));
    }
    return {{"session_id", session.id},
            {"scheme", to_string(session.scheme)},
            {"seed", session.seed},
            {"shuffled", session.shuffled},
            {"subject",
             {{"label", session.subject.label}, {"color_vision", session.subject.color_vision}}},
            {"created_at", session.created_at.time_since_epoch().count()},
            {"completed", session.completed_count()},
            {"total", session.trials.size()},
            {"trials", std::move(trials)}};
  }

  void mount_api(httplib::Server &server, ExperimentService &service, ClockFn clock) {
    server.Post("/sessions", guarded([&service, clock](const auto &req, auto &res) {
                  const auto body = parse_body(req);
                  std::optional<std::string> id;
                  if (body.contains("session_id")) {
                    id = body.at("session_id").template get<std::string>();
                  }
                  const auto session =
                      service.create_session(session_request_from_json(body), clock(), id);
                  send_json(res, to_json(session, clock()), 201);
                }));

    server.Get("/sessions", guarded([&service](const auto &, auto &res) {
                 json list = json::array();
                 for (const auto &s : service.sessions()) {
                   list.push_back({{"session_id", s.id},
                                   {"scheme", to_string(s.scheme)},
                                   {"completed", s.completed_count()},
                                   {"total", s.trials.size()}});
                 }
                 send_json(res, {{"sessions", std::move(list)}});
               }));

    server.Get(R"(/sessions/([^/]+))", guarded([&service, clock](const auto &req, auto &res) {
                 send_json(res, to_json(service.session(req.matches[1]), clock()));
               }));

    const auto trial_reply = [&service](const std::string &sid, const std::string &tid,
                                        const TrialProgress &progress, Timestamp now) {
      const auto session = service.session(sid);
      return to_json(session.trials[session.index_of(tid)], progress, now);
    };

    server.Post(R"(/sessions/([^/]+)/trials/([^/]+)/start)",
                guarded([&service, clock, trial_reply](const auto &req, auto &res) {
                  const auto now = clock();
                  const auto progress = service.start_trial(req.matches[1], req.matches[2], now);
                  send_json(res, trial_reply(req.matches[1], req.matches[2], progress, now));
                }));

    server.Get(R"(/sessions/([^/]+)/trials/([^/]+)/state)",
               guarded([&service, clock, trial_reply](const auto &req, auto &res) {
                 const auto now = clock();
                 const auto progress = service.poll_trial(req.matches[1], req.matches[2], now);
                 send_json(res, trial_reply(req.matches[1], req.matches[2], progress, now));
               }));

    server.Post(R"(/sessions/([^/]+)/trials/([^/]+)/choice)",
                guarded([&service, clock](const auto &req, auto &res) {
                  const auto body = parse_body(req);
                  const auto choice = body.at("choice").template get<std::string>();
                  const auto now = clock();
                  TrialOutcome outcome;
                  if (choice == "left" || choice == "right") {
                    outcome = service.submit_side(req.matches[1], req.matches[2],
                                                  choice == "left" ? Side::Left : Side::Right, now);
                  } else {
                    outcome = service.submit_choice(req.matches[1], req.matches[2],
                                                    parse_choice(choice), now);
                  }
                  send_json(res, to_json(outcome));
                }));

    server.Post(R"(/sessions/([^/]+)/trials/([^/]+)/redo)",
                guarded([&service, clock, trial_reply](const auto &req, auto &res) {
                  const auto now = clock();
                  const auto progress = service.redo_trial(req.matches[1], req.matches[2], now);
                  send_json(res, trial_reply(req.matches[1], req.matches[2], progress, now));
                }));

    server.Get(R"(/sessions/([^/]+)/trials/([^/]+)/panels)",
               guarded([&service](const auto &req, auto &res) {
                 if (!req.has_param("panel")) {
                   throw std::invalid_argument(
                       "missing query parameter 'panel' (stimulus, new, left or right)");
                 }
                 const auto kind = parse_panel_kind(req.get_param_value("panel"));
                 const auto bytes =
                     png::encode(service.trial_panel(req.matches[1], req.matches[2], kind));
                 res.status = 200;
                 res.set_content(std::string(bytes.begin(), bytes.end()), "image/png");
               }));

    server.Get("/scores", guarded([&service](const auto &req, auto &res) {
                 json tables = json::array();
                 std::vector<BaselineScheme> schemes{BaselineScheme::Group1,
                                                     BaselineScheme::Group2};
                 if (req.has_param("scheme")) {
                   schemes = {parse_scheme(req.get_param_value("scheme"))};
                 }
                 for (const auto scheme : schemes) {
                   auto table = to_json(service.scores(scheme));
                   table["scheme"] = to_string(scheme);
                   tables.push_back(std::move(table));
                 }
                 send_json(res, {{"tables", std::move(tables)}});
               }));
  }

}  // namespace afterimage::experiment
