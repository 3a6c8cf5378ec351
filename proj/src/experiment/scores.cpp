/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "afterimage/experiment/scores.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "afterimage/experiment/events.hpp"

namespace afterimage::experiment {

  namespace {

    std::string label(const Rgb &c) {
      if (const auto named = named_color_of(c)) {
        return std::string(name(*named));
      }
      return to_string(c);
    }

    ScoreCell &find_or_add(ScoreTable &table, const Rgb &test, const Rgb &next) {
      for (auto &cell : table.cells) {
        if (cell.test == test && cell.next == next) {
          return cell;
        }
      }
      table.cells.push_back({test, next});
      return table.cells.back();
    }

  }  // namespace

  const ScoreCell &ScoreTable::cell(const Rgb &test, const Rgb &next) const {
    for (const auto &c : cells) {
      if (c.test == test && c.next == next) {
        return c;
      }
    }
    throw NotFoundError(fmt::format("no score cell for test {} / next {}", to_string(test),
                                    to_string(next)));
  }

  ScoreTable aggregate_scores(std::span<const Session> sessions) {
    ScoreTable table;
    for (const auto &t : build_battery(BaselineScheme::Group2)) {
      table.cells.push_back({t.stimulus.test, t.stimulus.next});
    }
    for (const auto &session : sessions) {
      for (std::size_t i = 0; i < session.trials.size(); ++i) {
        const auto *done = std::get_if<state::Completed>(&session.progress[i].state);
        if (done == nullptr) {
          continue;
        }
        const auto &stimulus = session.trials[i].stimulus;
        auto &cell = find_or_add(table, stimulus.test, stimulus.next);
        cell.s1_total += done->outcome.s1_score;
        cell.s2_total += done->outcome.s2_score;
        ++cell.completed;
      }
    }
    return table;
  }

  std::vector<Session> sessions_with_scheme(std::span<const Session> sessions,
                                            BaselineScheme scheme) {
    std::vector<Session> out;
    std::copy_if(sessions.begin(), sessions.end(), std::back_inserter(out),
                 [scheme](const Session &s) { return s.scheme == scheme; });
    return out;
  }

  std::string format_score_table(const ScoreTable &table) {
    std::vector<Rgb> tests;
    std::vector<Rgb> nexts;
    for (const auto &c : table.cells) {
      if (std::find(tests.begin(), tests.end(), c.test) == tests.end()) {
        tests.push_back(c.test);
      }
      if (std::find(nexts.begin(), nexts.end(), c.next) == nexts.end()) {
        nexts.push_back(c.next);
      }
    }

    std::string out = fmt::format("{:<10}{:<4}", "C_OT", "");
    for (const auto &n : nexts) {
      out += fmt::format("{:>9}", label(n));
    }
    out += '\n';
    for (const auto &t : tests) {
      for (const bool s1 : {true, false}) {
        out += fmt::format("{:<10}{:<4}", label(t), s1 ? "S1" : "S2");
        for (const auto &n : nexts) {
          const auto it = std::find_if(table.cells.begin(), table.cells.end(),
                                       [&](const ScoreCell &c) { return c.test == t && c.next == n; });
          if (it == table.cells.end()) {
            out += fmt::format("{:>9}", "-");
          } else {
            out += fmt::format("{:>9g}", s1 ? it->s1_total : it->s2_total);
          }
        }
        out += '\n';
      }
    }
    return out;
  }

  nlohmann::json to_json(const ScoreTable &table) {
    auto cells = nlohmann::json::array();
    for (const auto &c : table.cells) {
      cells.push_back({{"test", to_json(c.test)},
                       {"next", to_json(c.next)},
                       {"s1_total", c.s1_total},
                       {"s2_total", c.s2_total},
                       {"completed", c.completed}});
    }
    return {{"cells", std::move(cells)}};
  }

}  // namespace afterimage::experiment
