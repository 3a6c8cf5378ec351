/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>
#include <httplib.h>

#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "afterimage/cli.hpp"
#include "afterimage/experiment/events.hpp"
#include "afterimage/png.hpp"
#include "support.hpp"

extern char **environ;

using namespace afterimage;
using nlohmann::json;

namespace {

  struct Result {
    int code;
    std::string out;
    std::string err;
  };

  Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "afterimage");
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
  }

  std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
      v.push_back(l);
    }
    return v;
  }

  /// The real binary as a child process with stdout on a pipe.
  class Child {
   public:
    explicit Child(const std::vector<std::string> &args) {
      int fds[2];
      REQUIRE(pipe(fds) == 0);
      posix_spawn_file_actions_t actions;
      posix_spawn_file_actions_init(&actions);
      posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
      posix_spawn_file_actions_addclose(&actions, fds[0]);
      std::vector<char *> argv;
      std::vector<std::string> storage{AFTERIMAGE_BIN};
      storage.insert(storage.end(), args.begin(), args.end());
      for (auto &s : storage) {
        argv.push_back(s.data());
      }
      argv.push_back(nullptr);
      REQUIRE(posix_spawn(&pid_, AFTERIMAGE_BIN, &actions, nullptr, argv.data(), environ) == 0);
      posix_spawn_file_actions_destroy(&actions);
      close(fds[1]);
      fd_ = fds[0];
    }
    ~Child() {
      if (pid_ > 0) {
        kill(pid_, SIGKILL);
        waitpid(pid_, nullptr, 0);
      }
      close(fd_);
    }
    Child(const Child &) = delete;
    Child &operator=(const Child &) = delete;

    /// Next stdout line, or empty after `timeout_ms` without one.
    std::string read_line(int timeout_ms = 10'000) {
      while (true) {
        const auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
          auto line = buffer_.substr(0, nl);
          buffer_.erase(0, nl + 1);
          return line;
        }
        pollfd p{fd_, POLLIN, 0};
        if (poll(&p, 1, timeout_ms) <= 0) {
          return {};
        }
        char chunk[256];
        const auto n = read(fd_, chunk, sizeof chunk);
        if (n <= 0) {
          return {};
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
      }
    }

    void signal(int sig) {
      kill(pid_, sig);
    }

    int wait() {
      int status = 0;
      waitpid(pid_, &status, 0);
      pid_ = -1;
      return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

   private:
    pid_t pid_{-1};
    int fd_{-1};
    std::string buffer_;
  };

}  // namespace

TEST_CASE("predict prints the model colors") {
  const auto r = run_cli({"predict", "--test", "red", "--inducing", "white", "--new", "white"});
  CHECK(r.code == 0);
  CHECK(r.out.find("C_AT  (0.76, 1, 1)") != std::string::npos);
  CHECK(r.out.find("C_AI  (0.9, 0.9, 0.9)") != std::string::npos);
  CHECK(r.out.find("provenance=Default") != std::string::npos);
  CHECK(r.out.find("C_AT = 0.24(1 - C_OT) + 0.16 C_OI + 0.6 C_N") != std::string::npos);

  const auto special = run_cli({"predict", "--test", "RED", "--inducing", "white", "--new", "red"});
  CHECK(special.out.find("provenance=SpecialRed") != std::string::npos);

  const auto gray = run_cli({"predict", "--test", "0.5,0.5,0.5", "--inducing", "0.5,0.5,0.5",
                             "--new", "0.5,0.5,0.5", "--json"});
  REQUIRE(gray.code == 0);
  const auto j = json::parse(gray.out);
  for (const auto *key : {"c_mt", "c_at"}) {
    for (const auto &v : j.at(key)) {
      CHECK(v.get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
  CHECK(j.at("params").at("provenance") == "Default");

  const auto manual = run_cli({"predict", "--test", "red", "--inducing", "white", "--new", "red",
                               "--alpha", "0.5", "--json"});
  const auto m = json::parse(manual.out);
  CHECK(m.at("params").at("provenance") == "Manual");
  CHECK(m.at("params").at("alpha") == 0.5);
  CHECK(m.at("params").at("beta_t") == 0.35);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run_cli({"predict", "--test", "purple", "--inducing", "white", "--new", "white"}).code
        == cli::kExitUsage);
  CHECK(run_cli({"predict", "--test", "red"}).code == cli::kExitUsage);
  CHECK(run_cli({"predict", "--test", "red", "--inducing", "white", "--new", "red", "--alpha",
                 "1.5"})
            .code
        == cli::kExitUsage);
  CHECK(run_cli({"bogus"}).code == cli::kExitUsage);
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"figure", "--radius", "0"}).code == cli::kExitUsage);
  CHECK(run_cli({"figure", "--scheme", "group7"}).code == cli::kExitUsage);
  CHECK(run_cli({"serve", "--listen", "nowhere"}).code == cli::kExitUsage);
  const auto help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("predict") != std::string::npos);
}

TEST_CASE("figure writes four panels") {
  testing::TempDir dir;
  const auto out = dir.path() / "made" / "here";
  const auto r = run_cli({"figure", "--test", "blue", "--inducing", "red", "--new", "magenta",
                          "--name", "f6r", "--out", out.string()});
  REQUIRE(r.code == 0);
  const auto paths = lines(r.out);
  REQUIRE(paths.size() == 4);
  for (const char suffix : {'a', 'b', 'c', 'd'}) {
    CHECK(std::filesystem::exists(out / (std::string("f6r_") + suffix + ".png")));
  }
  const auto d = png::read_file(out / "f6r_d.png");
  const auto surround = d.pixel(4, 4);
  CHECK(std::abs(int(surround[0]) - 204) <= 2);
  CHECK(std::abs(int(surround[1]) - 51) <= 2);
  CHECK(std::abs(int(surround[2]) - 255) <= 2);

  const auto group1 = run_cli({"figure", "--scheme", "group1", "--test", "cyan", "--out",
                               dir.path().string()});
  CHECK(group1.code == cli::kExitUsage);

  const auto missing = dir.path() / "absent";
  const auto refused = run_cli({"figure", "--no-create", "--out", missing.string()});
  CHECK(refused.code == cli::kExitRuntime);
  CHECK_FALSE(std::filesystem::exists(missing));
}

TEST_CASE("figure honours the output directory variable") {
  testing::TempDir dir;
  setenv(cli::kOutputDirEnv, dir.path().c_str(), 1);
  const auto r = run_cli({"figure", "--width", "64", "--height", "64", "--radius", "16"});
  unsetenv(cli::kOutputDirEnv);
  REQUIRE(r.code == 0);
  CHECK(std::filesystem::exists(dir.path() / "figure_a.png"));
  CHECK(png::read_file(dir.path() / "figure_d.png").width() == 64);
}

TEST_CASE("report flags the chromatic-surround figures") {
  const auto r = run_cli({"report"});
  REQUIRE(r.code == 0);
  std::size_t flagged = 0;
  for (const auto &l : lines(r.out)) {
    if (l.find("DISCREPANCY") != std::string::npos) {
      ++flagged;
      CHECK(l.find("C_AT") != std::string::npos);
    }
  }
  CHECK(flagged == 2);
  CHECK(r.out.find("(0.6, 1, 0.24)") != std::string::npos);
  CHECK(r.out.find("(1, 0.24, 0.6)") != std::string::npos);
  CHECK(r.out.find("Scores") == std::string::npos);

  const auto j = json::parse(run_cli({"report", "--json"}).out);
  int discrepancies = 0;
  for (const auto &row : j.at("figures")) {
    if (row.at("c_at_status") == "discrepancy") {
      ++discrepancies;
      CHECK(row.contains("c_at_with_white_surround"));
    }
  }
  CHECK(discrepancies == 2);
}

TEST_CASE("report tabulates logs") {
  testing::TempDir dir;
  const auto empty = dir.path() / "empty.jsonl";
  std::ofstream(empty).close();
  const auto e = run_cli({"report", "--log", empty.string()});
  CHECK(e.code == 0);
  CHECK(e.out.find("Scores from 0 session(s)") != std::string::npos);

  CHECK(run_cli({"report", "--log", (dir.path() / "nope.jsonl").string()}).code
        == cli::kExitRuntime);
  const auto junk = dir.path() / "junk.jsonl";
  std::ofstream(junk) << "garbage\n";
  CHECK(run_cli({"report", "--log", junk.string()}).code == cli::kExitRuntime);
}

TEST_CASE("serve refuses an occupied port") {
  httplib::Server blocker;
  const int port = blocker.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  testing::TempDir dir;
  const auto r = run_cli({"serve", "--listen", "127.0.0.1:" + std::to_string(port), "--log",
                          (dir.path() / "e.jsonl").string()});
  CHECK(r.code == cli::kExitRuntime);
  CHECK(r.err.find("cannot listen") != std::string::npos);
}

TEST_CASE("serve shuts down cleanly on SIGTERM and the log replays") {
  testing::TempDir dir;
  const auto log = dir.path() / "events.jsonl";
  Child child({"serve", "--listen", "127.0.0.1:0", "--log", log.string(), "--width", "64",
               "--height", "64", "--radius", "16"});
  const auto banner = child.read_line();
  std::smatch m;
  REQUIRE(std::regex_search(banner, m, std::regex(R"(listening on http://127\.0\.0\.1:(\d+))")));
  const int port = std::stoi(m[1]);

  httplib::Client c("127.0.0.1", port);
  const auto created = c.Post("/sessions", R"({"session_id":"live","seed":3})", "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  CHECK(json::parse(created->body).at("trials").size() == 15);
  const auto started = c.Post("/sessions/live/trials/t04/start", "", "application/json");
  REQUIRE(started);
  CHECK(started->status == 200);
  const auto root = c.Get("/");
  REQUIRE(root);
  CHECK(root->status == 200);

  child.signal(SIGTERM);
  CHECK(child.read_line() == "stopped; event log flushed");
  CHECK(child.wait() == 0);

  const auto sessions = experiment::replay(experiment::EventLog::read(log));
  REQUIRE(sessions.size() == 1);
  CHECK(sessions[0].id == "live");
  CHECK(std::holds_alternative<experiment::state::Adapting>(sessions[0].progress[3].state));
}
