// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include "radiant/bridge.hpp"
#include "radiant/io.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace radiant {

using nlohmann::json;

RgbImage loopback_recolor(const RgbImage& img, const Vec3& target, double lambda) {
  RgbImage out = img;
  for (auto& p : out.pixels) p = (1.0 - lambda) * p + lambda * target;
  return out;
}

RgbImage loopback_mean_fill(const RgbImage& img, const MaskImage& mask) {
  require_same_shape(img, mask, "mean_fill");
  long sum[3] = {0, 0, 0};
  long count = 0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (mask[i]) continue;
    for (int c = 0; c < 3; ++c) sum[c] += to_byte(img[i][c]);
    ++count;
  }
  Vec3 fill = Vec3::Zero();
  if (count > 0) {
    for (int c = 0; c < 3; ++c) fill[c] = from_byte(static_cast<std::uint8_t>((sum[c] + count / 2) / count));
  }
  RgbImage out = img;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (mask[i]) out[i] = fill;
  }
  return out;
}

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

std::string field(const json& body, const char* key) {
  if (!body.contains(key) || !body[key].is_string()) {
    throw std::invalid_argument(std::string("missing string field '") + key + "'");
  }
  return body[key].get<std::string>();
}

}  // namespace

LoopbackServer::LoopbackServer(int port, std::optional<std::string> auth_token)
    : server_(std::make_unique<httplib::Server>()) {
  const auto authorized = [token = std::move(auth_token)](const httplib::Request& req) {
    return !token || req.get_header_value("Authorization") == "Bearer " + *token;
  };

  server_->Post("/v1/edit", [this, authorized](const httplib::Request& req,
                                               httplib::Response& res) {
    ++served_;
    if (!authorized(req)) return reply(res, 401, {{"error", "unauthorized"}});
    try {
      const json body = json::parse(req.body);
      const std::string instruction = field(body, "instruction");
      const std::string current_png = field(body, "current_png");
      std::istringstream words(instruction);
      std::string verb;
      words >> verb;
      if (verb != "recolor") return reply(res, 200, {{"edited_png", current_png}});
      double r, g, b, lambda;
      if (!(words >> r >> g >> b >> lambda)) {
        return reply(res, 400, {{"error", "expected 'recolor r g b lambda'"}});
      }
      const RgbImage img = decode_png_rgb(base64_decode(current_png));
      const RgbImage out = loopback_recolor(img, Vec3(r, g, b), lambda);
      reply(res, 200, {{"edited_png", base64_encode(encode_png(out))}});
    } catch (const std::exception& e) {
      reply(res, 400, {{"error", e.what()}});
    }
  });

  server_->Post("/v1/inpaint", [this, authorized](const httplib::Request& req,
                                                  httplib::Response& res) {
    ++served_;
    if (!authorized(req)) return reply(res, 401, {{"error", "unauthorized"}});
    try {
      const json body = json::parse(req.body);
      const RgbImage img = decode_png_rgb(base64_decode(field(body, "image_png")));
      const MaskImage mask = decode_png_mask(base64_decode(field(body, "mask_png")));
      const RgbImage out = loopback_mean_fill(img, mask);
      reply(res, 200, {{"inpainted_png", base64_encode(encode_png(out))}});
    } catch (const std::exception& e) {
      reply(res, 400, {{"error", e.what()}});
    }
  });

  port_ = port == 0 ? server_->bind_to_any_port("127.0.0.1")
                    : (server_->bind_to_port("127.0.0.1", port) ? port : -1);
  if (port_ <= 0) throw InputError("loopback server could not bind 127.0.0.1:" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

LoopbackServer::~LoopbackServer() { stop(); }

void LoopbackServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace radiant
