// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "radiant/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return radiant::cli::run(args, std::cout, std::cerr);
}
