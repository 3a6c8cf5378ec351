/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <functional>

#include <json.hpp>

#include "afterimage/experiment/service.hpp"

namespace httplib {
  class Server;
}

namespace afterimage::experiment {

  using ClockFn = std::function<Timestamp()>;

  /// Wall clock truncated to milliseconds.
  Timestamp system_now();

  nlohmann::json to_json(const Session &session, std::optional<Timestamp> now = std::nullopt);
  nlohmann::json to_json(const TrialSpec &spec, const TrialProgress &progress,
                         std::optional<Timestamp> now = std::nullopt);
  nlohmann::json to_json(const TrialOutcome &outcome);

  /**
   * Registers the JSON API on `server`:
   *
   *   POST /sessions                                  create (201)
   *   GET  /sessions                                  list
   *   GET  /sessions/{id}
   *   POST /sessions/{id}/trials/{tid}/start
   *   GET  /sessions/{id}/trials/{tid}/state
   *   POST /sessions/{id}/trials/{tid}/choice         {"choice": "left"|"right"|"s1"|"s2"|"almost_same"}
   *   POST /sessions/{id}/trials/{tid}/redo
   *   GET  /sessions/{id}/trials/{tid}/panels?panel=stimulus|new|left|right   (image/png)
   *   GET  /scores[?scheme=group1|group2]
   *
   * Errors are {"error": message} with 400 (bad input), 404 (unknown id) or
   * 409 (not allowed in the current trial state).
   */
  void mount_api(httplib::Server &server, ExperimentService &service, ClockFn clock = system_now);

}  // namespace afterimage::experiment
