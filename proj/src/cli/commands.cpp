/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "afterimage/cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "afterimage/color.hpp"
#include "afterimage/experiment/events.hpp"
#include "afterimage/experiment/http_api.hpp"
#include "afterimage/experiment/scores.hpp"
#include "afterimage/experiment/service.hpp"
#include "afterimage/model.hpp"
#include "afterimage/png.hpp"
#include "afterimage/published_figures.hpp"
#include "afterimage/render.hpp"

namespace afterimage::cli {

  namespace {

    namespace fs = std::filesystem;
    using nlohmann::json;

    /// Input that parsed syntactically but is not acceptable.
    class UsageError : public std::runtime_error {
     public:
      using std::runtime_error::runtime_error;
    };

    struct RenderOptions {
      int width{512};
      int height{512};
      double radius{100.0};
      double sigma{4.0};

      render::Geometry geometry() const {
        return render::Geometry::centered(width, height, radius);
      }
      render::BlurSettings blur() const {
        return {sigma, 0};
      }
    };

    void add_render_options(CLI::App &cmd, RenderOptions &o) {
      cmd.add_option("--width", o.width, "Image width in pixels")->capture_default_str();
      cmd.add_option("--height", o.height, "Image height in pixels")->capture_default_str();
      cmd.add_option("--radius", o.radius, "Test-field circle radius in pixels")
          ->capture_default_str();
      cmd.add_option("--sigma", o.sigma, "Gaussian blur sigma in pixels for afterimage panels")
          ->capture_default_str();
    }

    Rgb color_arg(const std::string &text, std::string_view flag) {
      try {
        return parse_color(text);
      } catch (const std::invalid_argument &e) {
        throw UsageError(fmt::format("{}: {}", flag, e.what()));
      }
    }

    json color_json(const Rgb &c) {
      return json::array({c.r(), c.g(), c.b()});
    }

    // ---------------------------------------------------------------- predict

    struct PredictOptions {
      std::string test{"red"};
      std::string inducing{"white"};
      std::string next{"white"};
      std::optional<double> alpha;
      std::optional<double> beta_t;
      std::optional<double> beta_i;
      bool json{false};
    };

    int cmd_predict(const PredictOptions &o, std::ostream &out) {
      const StimulusSpec spec{color_arg(o.test, "--test"), color_arg(o.inducing, "--inducing"),
                              color_arg(o.next, "--new")};
      auto params = select_params(spec);
      if (o.alpha || o.beta_t || o.beta_i) {
        try {
          const auto pick = [](const std::optional<double> &v, Weight fallback) {
            return v ? Weight::from_double(*v) : fallback;
          };
          params = ModelParams::manual(pick(o.alpha, params.alpha()),
                                       pick(o.beta_t, params.beta_t()),
                                       pick(o.beta_i, params.beta_i()));
        } catch (const std::invalid_argument &e) {
          throw UsageError(e.what());
        }
      }
      const auto p = predict(spec, params);
      const auto k = test_field_coefficients(p.params);

      if (o.json) {
        const json j = {
            {"input",
             {{"test", color_json(spec.test)},
              {"inducing", color_json(spec.inducing)},
              {"next", color_json(spec.next)}}},
            {"c_mt", color_json(p.modified_test)},
            {"c_at", color_json(p.afterimage_test)},
            {"c_ai", color_json(p.afterimage_inducing)},
            {"params",
             {{"alpha", p.params.alpha().value()},
              {"beta_t", p.params.beta_t().value()},
              {"beta_i", p.params.beta_i().value()},
              {"provenance", to_string(p.params.provenance())}}},
            {"coefficients",
             {{"opposite_test", k.opposite_test}, {"inducing", k.inducing}, {"next", k.next}}}};
        out << j.dump(2) << '\n';
        return kExitOk;
      }

      fmt::print(out, "C_OT  {}\nC_OI  {}\nC_N   {}\n\n", to_string(spec.test),
                 to_string(spec.inducing), to_string(spec.next));
      fmt::print(out, "C_MT  {}\nC_AT  {}\nC_AI  {}\n\n", to_string(p.modified_test),
                 to_string(p.afterimage_test), to_string(p.afterimage_inducing));
      fmt::print(out, "alpha={:g} beta_t={:g} beta_i={:g} provenance={}\n",
                 p.params.alpha().value(), p.params.beta_t().value(), p.params.beta_i().value(),
                 to_string(p.params.provenance()));
      fmt::print(out, "C_AT = {:g}(1 - C_OT) + {:g} C_OI + {:g} C_N\n", k.opposite_test,
                 k.inducing, k.next);
      return kExitOk;
    }

    // ----------------------------------------------------------------- figure

    struct FigureOptions {
      std::string test{"red"};
      std::string inducing{"white"};
      std::string next{"white"};
      std::string scheme{"group2"};
      std::string name{"figure"};
      std::string out_dir;
      bool all_published{false};
      bool no_create{false};
      RenderOptions render;
    };

    void write_panels(const fs::path &dir, std::string_view prefix,
                      const render::FigurePanels &panels, std::ostream &out) {
      const std::array<std::pair<char, const render::RasterImage *>, 4> files{{
          {'a', &panels.stimulus},
          {'b', &panels.next},
          {'c', &panels.baseline},
          {'d', &panels.predicted},
      }};
      for (const auto &[suffix, image] : files) {
        const auto path = dir / fmt::format("{}_{}.png", prefix, suffix);
        png::write_file(path, *image);
        out << path.string() << '\n';
      }
    }

    int cmd_figure(const FigureOptions &o, std::ostream &out) {
      fs::path dir = o.out_dir;
      if (dir.empty()) {
        const char *env = std::getenv(kOutputDirEnv);
        dir = env != nullptr && *env != '\0' ? fs::path(env) : fs::path(".");
      }
      BaselineScheme scheme{};
      render::Geometry geometry;
      try {
        scheme = parse_scheme(o.scheme);
        geometry = o.render.geometry();
        render::validate(geometry);
        render::gaussian_kernel(o.render.blur());
      } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
      }

      if (!fs::is_directory(dir)) {
        if (o.no_create) {
          throw std::runtime_error(fmt::format("output directory {} does not exist", dir.string()));
        }
        fs::create_directories(dir);
      }

      if (o.all_published) {
        for (const auto &figure : published_figures()) {
          const auto panels =
              render::render_figure(figure.spec, BaselineScheme::Group2, geometry, o.render.blur());
          write_panels(dir, figure.name, panels, out);
        }
        return kExitOk;
      }

      const StimulusSpec spec{color_arg(o.test, "--test"), color_arg(o.inducing, "--inducing"),
                              color_arg(o.next, "--new")};
      render::FigurePanels panels;
      try {
        panels = render::render_figure(spec, scheme, geometry, o.render.blur());
      } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
      }
      write_panels(dir, o.name, panels, out);
      return kExitOk;
    }

    // ----------------------------------------------------------------- report

    struct ReportOptions {
      std::vector<std::string> logs;
      bool json{false};
    };

    int cmd_report(const ReportOptions &o, std::ostream &out) {
      std::vector<FigureCheck> checks;
      for (const auto &figure : published_figures()) {
        checks.push_back(check_figure(figure));
      }

      std::vector<experiment::Session> sessions;
      for (const auto &log : o.logs) {
        if (!fs::exists(log)) {
          throw std::runtime_error(fmt::format("event log {} does not exist", log));
        }
        auto replayed = experiment::replay(experiment::EventLog::read(log));
        sessions.insert(sessions.end(), std::make_move_iterator(replayed.begin()),
                        std::make_move_iterator(replayed.end()));
      }

      constexpr std::array kSchemes{BaselineScheme::Group1, BaselineScheme::Group2};

      if (o.json) {
        json figures = json::array();
        for (const auto &c : checks) {
          const auto agreement = [](Agreement a) {
            return a == Agreement::Match      ? "match"
                   : a == Agreement::Mismatch ? "discrepancy"
                                              : "not_printed";
          };
          json row = {{"name", c.figure->name},
                      {"c_at", color_json(c.prediction.afterimage_test)},
                      {"c_ai", color_json(c.prediction.afterimage_inducing)},
                      {"provenance", to_string(c.prediction.params.provenance())},
                      {"c_at_status", agreement(c.test_agreement)},
                      {"c_ai_status", agreement(c.inducing_agreement)},
                      {"c_ct_status", agreement(c.baseline_agreement)}};
          if (c.figure->printed_test) {
            row["printed_c_at"] = color_json(*c.figure->printed_test);
          }
          if (c.figure->printed_inducing) {
            row["printed_c_ai"] = color_json(*c.figure->printed_inducing);
          }
          if (c.white_surround_test) {
            row["c_at_with_white_surround"] = color_json(*c.white_surround_test);
          }
          figures.push_back(std::move(row));
        }
        json result = {{"figures", std::move(figures)}};
        if (!o.logs.empty()) {
          json tables = json::array();
          for (const auto scheme : kSchemes) {
            auto t = experiment::to_json(
                experiment::aggregate_scores(experiment::sessions_with_scheme(sessions, scheme)));
            t["scheme"] = to_string(scheme);
            tables.push_back(std::move(t));
          }
          result["scores"] = std::move(tables);
        }
        out << result.dump(2) << '\n';
        return kExitOk;
      }

      out << "Model against printed values\n\n" << format_figure_report(checks);
      if (!o.logs.empty()) {
        fmt::print(out, "\nScores from {} session(s)\n", sessions.size());
        for (const auto scheme : kSchemes) {
          const auto subset = experiment::sessions_with_scheme(sessions, scheme);
          fmt::print(out, "\n{} baseline ({} session(s))\n", to_string(scheme), subset.size());
          out << experiment::format_score_table(experiment::aggregate_scores(subset));
        }
      }
      return kExitOk;
    }

    // ------------------------------------------------------------------ serve

    struct ServeOptions {
      std::string listen{"127.0.0.1:8080"};
      std::string log{"afterimage-events.jsonl"};
      std::string ui_dir;
      RenderOptions render;
    };

    int cmd_serve(const ServeOptions &o, std::ostream &out, std::ostream &err) {
      const auto colon = o.listen.rfind(':');
      if (colon == std::string::npos) {
        throw UsageError(fmt::format("--listen expects host:port, got '{}'", o.listen));
      }
      const auto host = o.listen.substr(0, colon);
      int port = 0;
      try {
        port = std::stoi(o.listen.substr(colon + 1));
      } catch (const std::exception &) {
        throw UsageError(fmt::format("--listen expects host:port, got '{}'", o.listen));
      }

      experiment::ServiceConfig config;
      config.log_path = o.log;
      config.geometry = o.render.geometry();
      config.blur = o.render.blur();
      try {
        render::validate(config.geometry);
      } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
      }
      experiment::ExperimentService service(config);

      httplib::Server server;
      // The library default adds SO_REUSEPORT, which lets a second server
      // share an occupied port instead of failing to bind.
      server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
      });
      experiment::mount_api(server, service);
      if (!o.ui_dir.empty()) {
        if (!server.set_mount_point("/", o.ui_dir)) {
          throw std::runtime_error(fmt::format("UI directory {} does not exist", o.ui_dir));
        }
      } else {
        server.Get("/", [](const httplib::Request &, httplib::Response &res) {
          res.set_content("afterimage experiment service: see /sessions and /scores\n",
                          "text/plain");
        });
      }

      // Block termination signals before the server spawns worker threads
      // so only the waiter below receives them.
      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      sigset_t previous;
      pthread_sigmask(SIG_BLOCK, &signals, &previous);

      int bound = -1;
      if (port == 0) {
        bound = server.bind_to_any_port(host);
      } else if (server.bind_to_port(host, port)) {
        bound = port;
      }
      if (bound < 0) {
        pthread_sigmask(SIG_SETMASK, &previous, nullptr);
        fmt::print(err, "error: cannot listen on {}\n", o.listen);
        return kExitRuntime;
      }
      fmt::print(out, "listening on http://{}:{} (event log {})\n", host, bound, o.log);
      out.flush();

      std::atomic<bool> finished{false};
      std::thread waiter([&server, &finished, signals] {
        int sig = 0;
        sigwait(&signals, &sig);
        // stop() is a no-op until the accept loop is running.
        while (!finished && !server.is_running()) {
          std::this_thread::sleep_for(std::chrono::milliseconds(1));
        }
        server.stop();
      });
      server.listen_after_bind();
      finished = true;
      // Wake the waiter if it is still blocked in sigwait.
      pthread_kill(waiter.native_handle(), SIGTERM);
      waiter.join();
      pthread_sigmask(SIG_SETMASK, &previous, nullptr);
      service.flush();
      fmt::print(out, "stopped; event log flushed\n");
      return kExitOk;
    }

  }  // namespace

  int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Negative afterimage color prediction, figure rendering and experiment service",
                 "afterimage"};
    app.require_subcommand(1);

    PredictOptions predict_opts;
    auto *predict_cmd = app.add_subcommand("predict", "Predict afterimage colors for a stimulus");
    predict_cmd->add_option("--test", predict_opts.test, "Test-field color (name or r,g,b)")
        ->required();
    predict_cmd->add_option("--inducing", predict_opts.inducing, "Surround color")->required();
    predict_cmd->add_option("--new", predict_opts.next, "New stimulating color")->required();
    predict_cmd->add_option("--alpha", predict_opts.alpha, "Override alpha");
    predict_cmd->add_option("--beta-t", predict_opts.beta_t, "Override beta_t");
    predict_cmd->add_option("--beta-i", predict_opts.beta_i, "Override beta_i");
    predict_cmd->add_flag("--json", predict_opts.json, "Machine-readable output");

    FigureOptions figure_opts;
    auto *figure_cmd = app.add_subcommand("figure", "Render the four comparison panels as PNG");
    figure_cmd->add_option("--test", figure_opts.test, "Test-field color")->capture_default_str();
    figure_cmd->add_option("--inducing", figure_opts.inducing, "Surround color")
        ->capture_default_str();
    figure_cmd->add_option("--new", figure_opts.next, "New stimulating color")
        ->capture_default_str();
    figure_cmd->add_option("--scheme", figure_opts.scheme, "Baseline scheme: group1 or group2")
        ->capture_default_str();
    figure_cmd->add_option("--name", figure_opts.name, "Output file prefix")->capture_default_str();
    figure_cmd->add_option("--out", figure_opts.out_dir,
                           fmt::format("Output directory (default ${} or .)", kOutputDirEnv));
    figure_cmd->add_flag("--all-paper-figures", figure_opts.all_published,
                         "Render all eight published comparison figures");
    figure_cmd->add_flag("--no-create", figure_opts.no_create,
                         "Fail instead of creating a missing output directory");
    add_render_options(*figure_cmd, figure_opts.render);

    ReportOptions report_opts;
    auto *report_cmd =
        app.add_subcommand("report", "Compare the model with printed values; tabulate scores");
    report_cmd->add_option("--log", report_opts.logs, "Session event log (repeatable)");
    report_cmd->add_flag("--json", report_opts.json, "Machine-readable output");

    ServeOptions serve_opts;
    auto *serve_cmd = app.add_subcommand("serve", "Run the experiment HTTP service");
    serve_cmd->add_option("--listen", serve_opts.listen, "host:port (port 0 picks a free port)")
        ->capture_default_str();
    serve_cmd->add_option("--log", serve_opts.log, "Event log file")->capture_default_str();
    serve_cmd->add_option("--ui-dir", serve_opts.ui_dir, "Static UI assets served at /");
    add_render_options(*serve_cmd, serve_opts.render);

    std::vector<const char *> argv;
    argv.reserve(args.size());
    for (const auto &a : args) {
      argv.push_back(a.c_str());
    }

    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError &e) {
      err << "error: " << e.what() << '\n';
      if (const auto *sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
        err << sub->help();
      } else {
        err << app.help();
      }
      return kExitUsage;
    }

    try {
      if (predict_cmd->parsed()) {
        return cmd_predict(predict_opts, out);
      }
      if (figure_cmd->parsed()) {
        return cmd_figure(figure_opts, out);
      }
      if (report_cmd->parsed()) {
        return cmd_report(report_opts, out);
      }
      return cmd_serve(serve_opts, out, err);
    } catch (const UsageError &e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::exception &e) {
      err << "error: " << e.what() << '\n';
      return kExitRuntime;
    }
  }

}  // namespace afterimage::cli
