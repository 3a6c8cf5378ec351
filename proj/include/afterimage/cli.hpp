/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace afterimage::cli {

  inline constexpr int kExitOk = 0;
  inline constexpr int kExitUsage = 1;
  inline constexpr int kExitRuntime = 2;

  /// Default output directory for `figure` when --out is not given.
  inline constexpr const char *kOutputDirEnv = "AFTERIMAGE_OUTPUT_DIR";

  /// Runs one command line (args[0] is the program name) and returns the
  /// process exit code: 0 success, 1 usage error, 2 runtime error.
  int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace afterimage::cli
