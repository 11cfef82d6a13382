// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

// Serves the reference /v1/edit and /v1/inpaint endpoints until interrupted.

#include <csignal>
#include <iostream>
#include <thread>

#include "radiant/bridge.hpp"

#include <CLI11.hpp>

namespace {
volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radiant loopback editor/inpainter server"};
  int port = 8080;
  std::optional<std::string> token;
  app.add_option("--port", port, "port on 127.0.0.1 (0 picks a free one)");
  app.add_option("--token", token, "require Authorization: Bearer <token>");
  CLI11_PARSE(app, argc, argv);

  try {
    radiant::LoopbackServer server(port, token);
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << server.url() << std::endl;
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
  } catch (const radiant::Error& e) {
    std::cerr << "loopback_server: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  }
  return 0;
}
