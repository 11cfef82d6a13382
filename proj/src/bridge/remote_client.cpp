// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "radiant/bridge.hpp"
#include "radiant/io.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace radiant {

using nlohmann::json;

void RemoteEndpoint::validate() const {
  if (base_url.empty()) throw InputError("remote endpoint needs a base_url");
  if (!(timeout > 0.0)) throw InputError("remote endpoint timeout must be > 0");
  if (max_retries < 0) throw InputError("remote endpoint max_retries must be >= 0");
  if (!(backoff_base >= 0.0) || !(backoff_factor >= 1.0)) {
    throw InputError("remote endpoint backoff must be non-negative and non-shrinking");
  }
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw ProtocolViolation("base64 payload length not a multiple of 4");
  std::vector<std::uint8_t> out(3 * text.size() / 4);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw ProtocolViolation("invalid base64 payload");
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

namespace {

std::string dims(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

RgbImage decode_field_png(const json& response, const char* key) {
  if (!response.is_object() || !response.contains(key) || !response[key].is_string()) {
    throw ProtocolViolation(std::string("response lacks string field '") + key + "'");
  }
  try {
    return decode_png_rgb(base64_decode(response[key].get<std::string>()));
  } catch (const ProtocolViolation&) {
    throw;
  } catch (const std::exception& e) {
    throw ProtocolViolation(std::string("field '") + key + "' is not a PNG: " + e.what());
  }
}

json parse_response(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ProtocolViolation(std::string("response is not JSON: ") + e.what());
  }
}

}  // namespace

RemoteClient::RemoteClient(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  endpoint_.validate();
}

std::string RemoteClient::post(const std::string& path, const std::string& body) {
  httplib::Client client(endpoint_.base_url);
  const auto whole = std::chrono::duration<double>(endpoint_.timeout);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(whole);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(whole - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (endpoint_.auth_token) headers.emplace("Authorization", "Bearer " + *endpoint_.auth_token);

  const int attempts = endpoint_.max_retries + 1;
  std::string last_error;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (attempt > 1) {
      const double delay = endpoint_.backoff_base *
                           std::pow(endpoint_.backoff_factor, attempt - 2);
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    if (on_attempt) on_attempt(attempt, body);
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) throw RemoteRejected(res->status, res->body);
    return res->body;
  }
  throw RemoteUnavailable(endpoint_.base_url + path + " unreachable after " +
                              std::to_string(attempts) + " attempts: " + last_error,
                          attempts);
}

RgbImage RemoteClient::edit(const RgbImage& current, const RgbImage& original,
                            const std::string& instruction) {
  require_same_shape(current, original, "remote_edit");
  const json request = {{"instruction", instruction},
                        {"current_png", base64_encode(encode_png(current))},
                        {"original_png", base64_encode(encode_png(original))}};
  const json response = parse_response(post("/v1/edit", request.dump()));
  RgbImage edited = decode_field_png(response, "edited_png");
  if (!edited.same_shape(current)) {
    throw ProtocolViolation("edited image is " + dims(edited.width, edited.height) +
                            ", expected " + dims(current.width, current.height));
  }
  return edited;
}

RgbImage RemoteClient::inpaint(const RgbImage& rgb, const MaskImage& mask) {
  require_same_shape(rgb, mask, "remote_inpaint");
  const json request = {{"image_png", base64_encode(encode_png(rgb))},
                        {"mask_png", base64_encode(encode_png(mask))}};
  const json response = parse_response(post("/v1/inpaint", request.dump()));
  RgbImage out = decode_field_png(response, "inpainted_png");
  if (!out.same_shape(rgb)) {
    throw ProtocolViolation("inpainted image is " + dims(out.width, out.height) +
                            ", expected " + dims(rgb.width, rgb.height));
  }
  for (int y = 0; y < rgb.height; ++y) {
    for (int x = 0; x < rgb.width; ++x) {
      if (mask.at(x, y)) continue;
      for (int c = 0; c < 3; ++c) {
        const int sent = to_byte(rgb.at(x, y)[c]);
        const int got = to_byte(out.at(x, y)[c]);
        if (std::abs(sent - got) > 1) {
          throw ProtocolViolation("inpaint modified unmasked pixel (" + std::to_string(x) +
                                  ", " + std::to_string(y) + ")");
        }
      }
    }
  }
  return out;
}

RgbImage remote_edit(const RemoteEndpoint& endpoint, const RgbImage& current,
                     const RgbImage& original, const EditInstruction& instruction) {
  return RemoteClient(endpoint).edit(current, original, instruction.text);
}

RgbImage remote_inpaint(const RemoteEndpoint& endpoint, const RgbImage& rgb,
                        const MaskImage& mask) {
  return RemoteClient(endpoint).inpaint(rgb, mask);
}

namespace {

class RemoteEditor final : public Editor {
 public:
  explicit RemoteEditor(RemoteEndpoint endpoint) : client_(std::move(endpoint)) {}

  RgbImage edit(const RgbImage& current, const RgbImage& original,
                const EditInstruction& instruction) override {
    return client_.edit(current, original, instruction.text);
  }

 private:
  RemoteClient client_;
};

}  // namespace

std::unique_ptr<Editor> remote_editor(RemoteEndpoint endpoint) {
  return std::make_unique<RemoteEditor>(std::move(endpoint));
}

}  // namespace radiant
