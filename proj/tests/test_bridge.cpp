// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <chrono>
#include <functional>
#include <random>
#include <thread>

#include "radiant/bridge.hpp"
#include "radiant/io.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace radiant {
namespace {

using nlohmann::json;

RgbImage quantized_image(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> u(0, 255);
  RgbImage img(w, h);
  for (auto& p : img.pixels) {
    for (int c = 0; c < 3; ++c) p[c] = from_byte(static_cast<std::uint8_t>(u(rng)));
  }
  return img;
}

// Serves one handler on 127.0.0.1 for the lifetime of the object.
class StubServer {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  explicit StubServer(Handler handler) {
    server_.Post("/v1/edit", handler);
    server_.Post("/v1/inpaint", handler);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

void reply_png(httplib::Response& res, const char* key, const RgbImage& img) {
  res.set_content(json{{key, base64_encode(encode_png(img))}}.dump(), "application/json");
}

int free_port() {
  httplib::Server s;
  const int port = s.bind_to_any_port("127.0.0.1");
  s.stop();
  return port;
}

RemoteEndpoint endpoint_for(const std::string& url) {
  RemoteEndpoint e;
  e.base_url = url;
  e.timeout = 5.0;
  e.max_retries = 0;
  return e;
}

TEST(Base64, KnownVectors) {
  const auto bytes = [](std::string s) { return std::vector<std::uint8_t>(s.begin(), s.end()); };
  EXPECT_EQ(base64_encode(bytes("")), "");
  EXPECT_EQ(base64_encode(bytes("f")), "Zg==");
  EXPECT_EQ(base64_encode(bytes("fo")), "Zm8=");
  EXPECT_EQ(base64_encode(bytes("foobar")), "Zm9vYmFy");
  EXPECT_EQ(base64_decode("Zm9vYg=="), bytes("foob"));
  EXPECT_THROW(base64_decode("Zm9"), ProtocolViolation);
  EXPECT_THROW(base64_decode("Zm9*"), ProtocolViolation);
}

TEST(Base64, RoundTripsArbitraryBytes) {
  std::mt19937_64 rng(4);
  for (int n = 0; n < 50; ++n) {
    std::vector<std::uint8_t> b(static_cast<std::size_t>(n * 7));
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
    EXPECT_EQ(base64_decode(base64_encode(b)), b);
  }
}

TEST(RemoteEndpoint, Validation) {
  RemoteEndpoint e;
  EXPECT_EQ(e.backoff_base, 0.5);
  EXPECT_EQ(e.backoff_factor, 2.0);
  EXPECT_THROW(e.validate(), InputError);  // empty url
  e.base_url = "http://127.0.0.1:1";
  EXPECT_NO_THROW(e.validate());
  e.timeout = 0.0;
  EXPECT_THROW(e.validate(), InputError);
  e.timeout = 1.0;
  e.max_retries = -1;
  EXPECT_THROW(e.validate(), InputError);
}

TEST(Loopback, IdentityEditIsBitIdentical) {
  LoopbackServer server;
  const RgbImage cur = quantized_image(17, 11, 1);
  const RgbImage orig = quantized_image(17, 11, 2);
  const RgbImage out = remote_edit(endpoint_for(server.url()), cur, orig, {"make it pop", {}});
  EXPECT_EQ(out, cur);
  EXPECT_EQ(server.requests_served(), 1);
}

TEST(Loopback, RecolorMatchesServerOperation) {
  LoopbackServer server;
  const RgbImage cur = quantized_image(9, 8, 3);
  auto editor = remote_editor(endpoint_for(server.url()));
  const RgbImage out = editor->edit(cur, cur, {"recolor 0 0 1 0.25", {}});
  const RgbImage want = quantize(loopback_recolor(cur, Vec3(0, 0, 1), 0.25));
  EXPECT_EQ(out, want);
  // Independent check on one pixel.
  const Vec3 p = cur.at(3, 4);
  EXPECT_NEAR(out.at(3, 4).z(), 0.75 * p.z() + 0.25, 0.5 / 255.0 + 1e-12);
  EXPECT_NEAR(out.at(3, 4).x(), 0.75 * p.x(), 0.5 / 255.0 + 1e-12);
}

TEST(Loopback, MalformedRecolorIsRejected) {
  LoopbackServer server;
  const RgbImage cur = quantized_image(4, 4, 5);
  try {
    remote_edit(endpoint_for(server.url()), cur, cur, {"recolor 1 0", {}});
    FAIL() << "expected RemoteRejected";
  } catch (const RemoteRejected& e) {
    EXPECT_EQ(e.status(), 400);
    EXPECT_EQ(e.exit_code(), ExitCode::kRemoteFailure);
  }
}

TEST(Loopback, AuthToken) {
  LoopbackServer server(0, std::string("s3cret"));
  const RgbImage cur = quantized_image(4, 4, 6);
  RemoteEndpoint e = endpoint_for(server.url());
  try {
    remote_edit(e, cur, cur, {"x", {}});
    FAIL() << "expected RemoteRejected";
  } catch (const RemoteRejected& err) {
    EXPECT_EQ(err.status(), 401);
  }
  e.auth_token = "wrong";
  EXPECT_THROW(remote_edit(e, cur, cur, {"x", {}}), RemoteRejected);
  e.auth_token = "s3cret";
  EXPECT_EQ(remote_edit(e, cur, cur, {"x", {}}), cur);
}

TEST(Loopback, MeanFillInpaint) {
  LoopbackServer server;
  const RgbImage img = quantized_image(10, 7, 7);
  MaskImage mask(10, 7);
  for (int y = 2; y < 5; ++y) {
    for (int x = 3; x < 8; ++x) mask.at(x, y) = 1;
  }
  const RgbImage out = remote_inpaint(endpoint_for(server.url()), img, mask);

  // Oracle: rounded mean of the unmasked bytes.
  double sum[3] = {0, 0, 0};
  int count = 0;
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 10; ++x) {
      if (mask.at(x, y)) continue;
      for (int c = 0; c < 3; ++c) sum[c] += to_byte(img.at(x, y)[c]);
      ++count;
    }
  }
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 10; ++x) {
      for (int c = 0; c < 3; ++c) {
        const int want = mask.at(x, y) ? static_cast<int>(std::lround(sum[c] / count))
                                       : to_byte(img.at(x, y)[c]);
        EXPECT_EQ(to_byte(out.at(x, y)[c]), want) << x << "," << y << "," << c;
      }
    }
  }
}

TEST(Loopback, EmptyMaskReturnsInput) {
  LoopbackServer server;
  const RgbImage img = quantized_image(6, 6, 8);
  const RgbImage out = remote_inpaint(endpoint_for(server.url()), img, MaskImage(6, 6));
  EXPECT_EQ(out, img);
}

TEST(Loopback, ClientDoesNotMutateInputs) {
  LoopbackServer server;
  const RgbImage cur = quantized_image(5, 5, 9);
  RgbImage copy = cur;
  remote_edit(endpoint_for(server.url()), copy, copy, {"recolor 1 1 1 1", {}});
  EXPECT_EQ(copy, cur);
}

TEST(Protocol, RequestCarriesSpecifiedFields) {
  json seen;
  std::string auth;
  StubServer stub([&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    auth = req.get_header_value("Authorization");
    const std::string key = req.path == "/v1/edit" ? "current_png" : "image_png";
    res.set_content(json{{"edited_png", seen[key]}, {"inpainted_png", seen[key]}}.dump(),
                    "application/json");
  });
  RemoteEndpoint e = endpoint_for(stub.url());
  e.auth_token = "tok";
  const RgbImage cur = quantized_image(6, 5, 10);
  const RgbImage orig = quantized_image(6, 5, 11);
  remote_edit(e, cur, orig, {"turn it blue", {}});
  EXPECT_EQ(seen["instruction"], "turn it blue");
  EXPECT_EQ(decode_png_rgb(base64_decode(seen["current_png"])), cur);
  EXPECT_EQ(decode_png_rgb(base64_decode(seen["original_png"])), orig);
  EXPECT_EQ(auth, "Bearer tok");

  MaskImage mask(6, 5);
  mask.at(1, 1) = 1;
  remote_inpaint(e, cur, mask);
  EXPECT_EQ(decode_png_rgb(base64_decode(seen["image_png"])), cur);
  EXPECT_EQ(decode_png_mask(base64_decode(seen["mask_png"])), mask);
}

TEST(Protocol, WrongSizeResponseNamesDimensions) {
  StubServer stub([](const httplib::Request&, httplib::Response& res) {
    const RgbImage small(3, 2);
    res.set_content(json{{"edited_png", base64_encode(encode_png(small))},
                         {"inpainted_png", base64_encode(encode_png(small))}}
                        .dump(),
                    "application/json");
  });
  const RgbImage cur = quantized_image(8, 6, 12);
  try {
    remote_edit(endpoint_for(stub.url()), cur, cur, {"x", {}});
    FAIL() << "expected ProtocolViolation";
  } catch (const ProtocolViolation& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("3x2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("8x6"), std::string::npos) << msg;
  }
  EXPECT_THROW(remote_inpaint(endpoint_for(stub.url()), cur, MaskImage(8, 6)), ProtocolViolation);
}

TEST(Protocol, ModifiedUnmaskedPixelIsViolation) {
  StubServer stub([](const httplib::Request& req, httplib::Response& res) {
    RgbImage img = decode_png_rgb(base64_decode(json::parse(req.body)["image_png"]));
    img.at(0, 0) = Vec3(1, 1, 1) - img.at(0, 0);
    reply_png(res, "inpainted_png", img);
  });
  RgbImage img = quantized_image(5, 5, 13);
  img.at(0, 0) = Vec3(0.1, 0.1, 0.1);
  MaskImage mask(5, 5);
  mask.at(4, 4) = 1;
  try {
    remote_inpaint(endpoint_for(stub.url()), img, mask);
    FAIL() << "expected ProtocolViolation";
  } catch (const ProtocolViolation& e) {
    EXPECT_NE(std::string(e.what()).find("(0, 0)"), std::string::npos) << e.what();
  }
  // The same change inside the mask is accepted.
  mask.at(0, 0) = 1;
  EXPECT_NO_THROW(remote_inpaint(endpoint_for(stub.url()), img, mask));
}

TEST(Protocol, OneLevelOfRoundingIsTolerated) {
  StubServer stub([](const httplib::Request& req, httplib::Response& res) {
    RgbImage img = decode_png_rgb(base64_decode(json::parse(req.body)["image_png"]));
    for (auto& p : img.pixels) p = (p + Vec3::Constant(1.0 / 255.0)).cwiseMin(1.0);
    reply_png(res, "inpainted_png", img);
  });
  const RgbImage img = quantized_image(5, 5, 14);
  EXPECT_NO_THROW(remote_inpaint(endpoint_for(stub.url()), img, MaskImage(5, 5)));
}

TEST(Protocol, MalformedResponses) {
  int mode = 0;
  StubServer stub([&](const httplib::Request&, httplib::Response& res) {
    switch (mode) {
      case 0: res.set_content("not json", "application/json"); break;
      case 1: res.set_content(R"({"other": 1})", "application/json"); break;
      case 2: res.set_content(R"({"edited_png": "@@@@"})", "application/json"); break;
      default: res.set_content(R"({"edited_png": "Zm9vYmFy"})", "application/json"); break;
    }
  });
  const RgbImage cur = quantized_image(4, 4, 15);
  for (mode = 0; mode < 4; ++mode) {
    try {
      remote_edit(endpoint_for(stub.url()), cur, cur, {"x", {}});
      ADD_FAILURE() << "mode " << mode << " accepted";
    } catch (const ProtocolViolation& e) {
      EXPECT_EQ(std::string(e.what()).rfind("protocol violation: ", 0), 0u);
    }
  }
}

TEST(Protocol, HttpErrorsAreNotRetried) {
  int calls = 0;
  StubServer stub([&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 503;
    res.set_content("busy", "text/plain");
  });
  RemoteEndpoint e = endpoint_for(stub.url());
  e.max_retries = 3;
  const RgbImage cur = quantized_image(4, 4, 16);
  try {
    remote_edit(e, cur, cur, {"x", {}});
    FAIL() << "expected RemoteRejected";
  } catch (const RemoteRejected& err) {
    EXPECT_EQ(err.status(), 503);
    EXPECT_EQ(err.body(), "busy");
  }
  EXPECT_EQ(calls, 1);
}

TEST(Retry, UnreachableEndpointBacksOffWithIdenticalBodies) {
  RemoteEndpoint e = endpoint_for("http://127.0.0.1:" + std::to_string(free_port()));
  e.timeout = 1.0;
  e.max_retries = 2;
  e.backoff_base = 0.05;
  e.backoff_factor = 2.0;
  RemoteClient client(e);
  std::vector<std::string> bodies;
  std::vector<std::chrono::steady_clock::time_point> stamps;
  client.on_attempt = [&](int attempt, const std::string& body) {
    EXPECT_EQ(attempt, static_cast<int>(bodies.size()) + 1);
    bodies.push_back(body);
    stamps.push_back(std::chrono::steady_clock::now());
  };
  const RgbImage cur = quantized_image(4, 4, 17);
  try {
    client.edit(cur, cur, "x");
    FAIL() << "expected RemoteUnavailable";
  } catch (const RemoteUnavailable& err) {
    EXPECT_EQ(err.attempts(), 3);
    EXPECT_EQ(err.exit_code(), ExitCode::kRemoteFailure);
  }
  ASSERT_EQ(bodies.size(), 3u);
  EXPECT_EQ(bodies[0], bodies[1]);
  EXPECT_EQ(bodies[1], bodies[2]);
  const auto gap = [&](int i) {
    return std::chrono::duration<double>(stamps[i + 1] - stamps[i]).count();
  };
  EXPECT_GE(gap(0), 0.05);
  EXPECT_GE(gap(1), 0.10);
}

TEST(Retry, SlowServerTimesOut) {
  StubServer stub([](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(600));
    res.set_content("{}", "application/json");
  });
  RemoteEndpoint e = endpoint_for(stub.url());
  e.timeout = 0.2;
  e.max_retries = 1;
  e.backoff_base = 0.01;
  const RgbImage cur = quantized_image(4, 4, 18);
  try {
    remote_edit(e, cur, cur, {"x", {}});
    FAIL() << "expected RemoteUnavailable";
  } catch (const RemoteUnavailable& err) {
    EXPECT_EQ(err.attempts(), 2);
  }
}

}  // namespace
}  // namespace radiant
