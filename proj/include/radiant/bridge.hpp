// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "radiant/error.hpp"
#include "radiant/idu.hpp"
#include "radiant/image.hpp"

namespace httplib {
class Server;
}

namespace radiant {

struct RemoteEndpoint {
  std::string base_url;  // e.g. "http://127.0.0.1:8080"
  double timeout = 30.0;  // seconds
  int max_retries = 2;
  std::optional<std::string> auth_token;
  /// Delay before retry k (0-based) is backoff_base * backoff_factor^k seconds.
  double backoff_base = 0.5;
  double backoff_factor = 2.0;

  void validate() const;
};

/// The server answered with a non-200 status.
class RemoteRejected : public Error {
 public:
  RemoteRejected(int status, std::string body)
      : Error("remote rejected request with HTTP " + std::to_string(status) + ": " + body,
              ExitCode::kRemoteFailure),
        status_(status),
        body_(std::move(body)) {}
  int status() const { return status_; }
  const std::string& body() const { return body_; }

 private:
  int status_;
  std::string body_;
};

/// No response after every retry.
class RemoteUnavailable : public Error {
 public:
  RemoteUnavailable(const std::string& what, int attempts)
      : Error(what, ExitCode::kRemoteFailure), attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

/// The server answered 200 with a response that breaks the protocol.
class ProtocolViolation : public Error {
 public:
  explicit ProtocolViolation(const std::string& what)
      : Error("protocol violation: " + what, ExitCode::kRemoteFailure) {}
};

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

/// Blocking client for the /v1/edit and /v1/inpaint endpoints. Transport
/// failures are retried with exponential backoff; HTTP errors are not.
class RemoteClient {
 public:
  explicit RemoteClient(RemoteEndpoint endpoint);

  RgbImage edit(const RgbImage& current, const RgbImage& original,
                const std::string& instruction);
  /// Verifies pixels outside the mask come back unchanged (within 1/255).
  RgbImage inpaint(const RgbImage& rgb, const MaskImage& mask);

  /// Invoked before every attempt with the 1-based attempt number and the
  /// exact request body.
  std::function<void(int attempt, const std::string& body)> on_attempt;

  const RemoteEndpoint& endpoint() const { return endpoint_; }

 private:
  std::string post(const std::string& path, const std::string& body);

  RemoteEndpoint endpoint_;
};

RgbImage remote_edit(const RemoteEndpoint& endpoint, const RgbImage& current,
                     const RgbImage& original, const EditInstruction& instruction);
RgbImage remote_inpaint(const RemoteEndpoint& endpoint, const RgbImage& rgb,
                        const MaskImage& mask);

/// Editor backed by a remote /v1/edit endpoint.
std::unique_ptr<Editor> remote_editor(RemoteEndpoint endpoint);

/// Reference server on 127.0.0.1: identity edit, "recolor r g b lambda" edit,
/// and mean-fill inpaint. Runs on a background thread until destroyed.
class LoopbackServer {
 public:
  /// Port 0 picks a free port.
  explicit LoopbackServer(int port = 0, std::optional<std::string> auth_token = std::nullopt);
  ~LoopbackServer();
  LoopbackServer(const LoopbackServer&) = delete;
  LoopbackServer& operator=(const LoopbackServer&) = delete;

  int port() const { return port_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int requests_served() const { return served_.load(); }
  void stop();

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> served_{0};
};

/// Server-side operations, exposed for tests and other hosts.
RgbImage loopback_recolor(const RgbImage& img, const Vec3& target, double lambda);
/// Masked pixels take the per-channel rounded 8-bit mean of unmasked pixels.
RgbImage loopback_mean_fill(const RgbImage& img, const MaskImage& mask);

}  // namespace radiant
