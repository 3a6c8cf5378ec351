/**
 * Copyright 2026 The Afterimage Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <iostream>
#include <string>
#include <vector>

#include "afterimage/cli.hpp"

int main(int argc, char **argv) {
  return afterimage::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
