// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include "radiant/cli.hpp"
#include "radiant/io.hpp"

#include <nlohmann/json.hpp>

namespace radiant::cli {

using nlohmann::json;

namespace {

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json resolution_json(const GridResolution& r) { return json::array({r.nx, r.ny, r.nz}); }

json endpoint_json(const RemoteEndpoint& e) {
  return {{"base_url", e.base_url},
          {"timeout", e.timeout},
          {"max_retries", e.max_retries},
          {"auth_token", e.auth_token ? json(*e.auth_token) : json(nullptr)},
          {"backoff_base", e.backoff_base},
          {"backoff_factor", e.backoff_factor}};
}

json train_json(const TrainConfig& t) {
  return {{"iterations", t.iterations},
          {"rays_per_batch", t.rays_per_batch},
          {"learning_rate", t.learning_rate},
          {"density_learning_rate",
           t.density_learning_rate ? json(*t.density_learning_rate) : json(nullptr)},
          {"adam_beta1", t.adam_beta1},
          {"adam_beta2", t.adam_beta2},
          {"adam_eps", t.adam_eps},
          {"depth_loss_weight", t.depth_loss_weight},
          {"samples_per_ray", t.samples_per_ray},
          {"jitter", t.jitter},
          {"resolution", resolution_json(t.resolution)},
          {"fixed_background",
           t.fixed_background ? vec3_json(*t.fixed_background) : json(nullptr)}};
}

json primitive_json(const Primitive& p) {
  return {{"shape", p.shape == PrimitiveShape::kSphere ? "sphere" : "box"},
          {"center", vec3_json(p.center)},
          {"size", vec3_json(p.size)},
          {"color", vec3_json(p.color)},
          {"role", p.role == PrimitiveRole::kObject ? "object" : "background"}};
}

json scene_json(const SceneSpec& s) {
  json prims = json::array();
  for (const Primitive& p : s.primitives) prims.push_back(primitive_json(p));
  return {{"path", nullptr},
          {"primitives", prims},
          {"ground",
           {{"enabled", s.ground.enabled},
            {"top", s.ground.top},
            {"thickness", s.ground.thickness},
            {"color_a", vec3_json(s.ground.color_a)},
            {"color_b", vec3_json(s.ground.color_b)},
            {"checker_size", s.ground.checker_size}}},
          {"resolution", resolution_json(s.resolution)},
          {"bounds", {{"min", vec3_json(s.bounds.min)}, {"max", vec3_json(s.bounds.max)}}},
          {"rig",
           {{"count", s.rig.count},
            {"orbit_radius", s.rig.orbit_radius},
            {"height", s.rig.height},
            {"look_at", vec3_json(s.rig.look_at)},
            {"fov_deg", s.rig.fov_deg},
            {"image_width", s.rig.image_width},
            {"image_height", s.rig.image_height},
            {"angle_offset_deg", s.rig.angle_offset_deg}}},
          {"density", s.density},
          {"color_noise", s.color_noise},
          {"samples_per_ray", s.samples_per_ray}};
}

TrainConfig default_object_training() {
  TrainConfig t;
  t.iterations = 800;
  t.rays_per_batch = 2048;
  t.learning_rate = 0.05;
  t.density_learning_rate = 0.2;
  t.samples_per_ray = 128;
  return t;
}

TrainConfig default_background_training() {
  TrainConfig t;
  t.iterations = 1000;
  t.rays_per_batch = 2048;
  t.learning_rate = 0.01;
  t.density_learning_rate = 0.2;
  t.depth_loss_weight = 0.1;
  t.samples_per_ray = 128;
  return t;
}

json default_document() {
  const IduSchedule idu;
  RemoteEndpoint endpoint;
  endpoint.base_url = "http://127.0.0.1:8080";
  return {
      {"seed", 0},
      {"out", "out"},
      {"quiet", false},
      {"scene", scene_json(default_scene_spec())},
      {"inpainter", {{"kind", "oracle"}, {"remote", endpoint_json(endpoint)}}},
      {"train",
       {{"object", train_json(default_object_training())},
        {"background", train_json(default_background_training())}}},
      {"idu", {{"outer_iterations", idu.outer_iterations}, {"d", idu.d}, {"n", idu.n}}},
      {"editor",
       {{"instruction", "keep the object unchanged"},
        {"builtin", {{"kind", "identity"}, {"params", json::object()}}},
        {"remote", nullptr}}},
      {"segmenter", "known_mask"},
      {"transform",
       {{"scale", 1.0},
        {"axis", json::array({0.0, 0.0, 1.0})},
        {"angle_deg", 0.0},
        {"translation", json::array({0.0, 0.0, 0.0})},
        {"centroid", nullptr}}},
      {"compose", {{"object", "auto"}, {"background", nullptr}}},
      {"render", {{"samples_per_ray", 192}, {"background", json::array({0.0, 0.0, 0.0})}}},
      {"eval", {{"renders", nullptr}}},
  };
}

// Paths whose value is free-form: any JSON replaces the default wholesale.
bool is_free_form(const std::string& path) {
  return path == "scene.primitives" || path == "editor.builtin.params" ||
         path == "editor.builtin" || path == "editor.remote" || path == "inpainter.remote";
}

void merge_into(json& base, const json& patch, const std::string& prefix) {
  if (!patch.is_object()) throw InputError("config: '" + prefix + "' must be a JSON object");
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!base.contains(it.key())) throw InputError("config: unknown key '" + path + "'");
    json& slot = base[it.key()];
    if (slot.is_object() && it.value().is_object() && !is_free_form(path)) {
      merge_into(slot, it.value(), path);
    } else {
      slot = it.value();
    }
  }
}

json& lookup(json& doc, const std::string& path) {
  json* node = &doc;
  std::string walked;
  std::istringstream parts(path);
  std::string key;
  while (std::getline(parts, key, '.')) {
    walked += walked.empty() ? key : "." + key;
    if (node->is_null() && is_free_form(walked.substr(0, walked.rfind('.')))) {
      *node = json::object();
    }
    if (!node->is_object()) throw InputError("config: unknown key '" + path + "'");
    const bool free_parent =
        walked.find('.') != std::string::npos && is_free_form(walked.substr(0, walked.rfind('.')));
    if (!node->contains(key) && !free_parent) {
      throw InputError("config: unknown key '" + path + "'");
    }
    node = &(*node)[key];
  }
  return *node;
}

// Typed accessors that name the offending key.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  Reader at(const std::string& key) const {
    const std::string p = path_.empty() ? key : path_ + "." + key;
    if (!node_.is_object() || !node_.contains(key)) {
      throw InputError("config: missing key '" + p + "'");
    }
    return Reader(node_[key], p);
  }
  bool is_null() const { return node_.is_null(); }
  const json& raw() const { return node_; }
  const std::string& path() const { return path_; }

  double number() const {
    if (!node_.is_number()) fail("a number");
    return node_.get<double>();
  }
  int integer() const {
    if (!node_.is_number_integer()) fail("an integer");
    return node_.get<int>();
  }
  std::uint64_t unsigned_integer() const {
    if (!node_.is_number_unsigned() && !(node_.is_number_integer() && node_.get<std::int64_t>() >= 0)) {
      fail("a non-negative integer");
    }
    return node_.get<std::uint64_t>();
  }
  bool boolean() const {
    if (!node_.is_boolean()) fail("a boolean");
    return node_.get<bool>();
  }
  std::string string() const {
    if (!node_.is_string()) fail("a string");
    return node_.get<std::string>();
  }
  Vec3 vec3() const {
    if (!node_.is_array() || node_.size() != 3) fail("an array of 3 numbers");
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
      if (!node_[i].is_number()) fail("an array of 3 numbers");
      v[i] = node_[i].get<double>();
    }
    return v;
  }
  GridResolution resolution() const {
    if (!node_.is_array() || node_.size() != 3) fail("an array of 3 integers");
    int r[3];
    for (int i = 0; i < 3; ++i) {
      if (!node_[i].is_number_integer()) fail("an array of 3 integers");
      r[i] = node_[i].get<int>();
    }
    return {r[0], r[1], r[2]};
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    throw InputError("config: '" + path_ + "' must be " + expected);
  }

  const json& node_;
  std::string path_;
};

RemoteEndpoint read_endpoint(const Reader& r) {
  if (!r.raw().is_object()) throw InputError("config: '" + r.path() + "' must be an object");
  RemoteEndpoint e;
  e.base_url = r.at("base_url").string();
  const json& j = r.raw();
  if (j.contains("timeout")) e.timeout = r.at("timeout").number();
  if (j.contains("max_retries")) e.max_retries = r.at("max_retries").integer();
  if (j.contains("auth_token") && !j["auth_token"].is_null()) {
    e.auth_token = r.at("auth_token").string();
  }
  if (j.contains("backoff_base")) e.backoff_base = r.at("backoff_base").number();
  if (j.contains("backoff_factor")) e.backoff_factor = r.at("backoff_factor").number();
  return e;
}

TrainConfig read_train(const Reader& r) {
  TrainConfig t;
  t.iterations = r.at("iterations").integer();
  t.rays_per_batch = r.at("rays_per_batch").integer();
  t.learning_rate = r.at("learning_rate").number();
  if (!r.at("density_learning_rate").is_null()) {
    t.density_learning_rate = r.at("density_learning_rate").number();
  }
  t.adam_beta1 = r.at("adam_beta1").number();
  t.adam_beta2 = r.at("adam_beta2").number();
  t.adam_eps = r.at("adam_eps").number();
  t.depth_loss_weight = r.at("depth_loss_weight").number();
  t.samples_per_ray = r.at("samples_per_ray").integer();
  t.jitter = r.at("jitter").boolean();
  t.resolution = r.at("resolution").resolution();
  if (!r.at("fixed_background").is_null()) t.fixed_background = r.at("fixed_background").vec3();
  return t;
}

Primitive read_primitive(const Reader& r) {
  Primitive p;
  const std::string shape = r.at("shape").string();
  if (shape == "sphere") p.shape = PrimitiveShape::kSphere;
  else if (shape == "box") p.shape = PrimitiveShape::kBox;
  else throw InputError("config: '" + r.path() + ".shape' must be 'sphere' or 'box'");
  p.center = r.at("center").vec3();
  if (r.at("size").raw().is_number()) {
    p.size = Vec3::Constant(r.at("size").number());
  } else {
    p.size = r.at("size").vec3();
  }
  p.color = r.at("color").vec3();
  const std::string role = r.at("role").string();
  if (role == "object") p.role = PrimitiveRole::kObject;
  else if (role == "background") p.role = PrimitiveRole::kBackground;
  else throw InputError("config: '" + r.path() + ".role' must be 'object' or 'background'");
  return p;
}

SceneSpec read_scene(const Reader& r) {
  SceneSpec s;
  const Reader prims = r.at("primitives");
  if (!prims.raw().is_array()) throw InputError("config: 'scene.primitives' must be an array");
  for (std::size_t i = 0; i < prims.raw().size(); ++i) {
    s.primitives.push_back(
        read_primitive(Reader(prims.raw()[i], "scene.primitives[" + std::to_string(i) + "]")));
  }
  const Reader g = r.at("ground");
  s.ground.enabled = g.at("enabled").boolean();
  s.ground.top = g.at("top").number();
  s.ground.thickness = g.at("thickness").number();
  s.ground.color_a = g.at("color_a").vec3();
  s.ground.color_b = g.at("color_b").vec3();
  s.ground.checker_size = g.at("checker_size").number();
  s.resolution = r.at("resolution").resolution();
  s.bounds = {r.at("bounds").at("min").vec3(), r.at("bounds").at("max").vec3()};
  const Reader rig = r.at("rig");
  s.rig.count = rig.at("count").integer();
  s.rig.orbit_radius = rig.at("orbit_radius").number();
  s.rig.height = rig.at("height").number();
  s.rig.look_at = rig.at("look_at").vec3();
  s.rig.fov_deg = rig.at("fov_deg").number();
  s.rig.image_width = rig.at("image_width").integer();
  s.rig.image_height = rig.at("image_height").integer();
  s.rig.angle_offset_deg = rig.at("angle_offset_deg").number();
  s.density = r.at("density").number();
  s.color_noise = r.at("color_noise").number();
  s.samples_per_ray = r.at("samples_per_ray").integer();
  return s;
}

json parse_document(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(what + ": invalid JSON: " + e.what());
  }
}

PipelineConfig read_config(const json& doc) {
  const Reader root(doc, "");
  PipelineConfig cfg;
  cfg.seed = root.at("seed").unsigned_integer();
  cfg.out = root.at("out").string();
  cfg.quiet = root.at("quiet").boolean();
  cfg.scene = read_scene(root.at("scene"));

  const std::string inpainter = root.at("inpainter").at("kind").string();
  if (inpainter == "remote") {
    cfg.remote_inpainter = read_endpoint(root.at("inpainter").at("remote"));
  } else if (inpainter != "oracle") {
    throw InputError("config: 'inpainter.kind' must be 'oracle' or 'remote'");
  }

  cfg.train_object = read_train(root.at("train").at("object"));
  cfg.train_background = read_train(root.at("train").at("background"));

  const Reader idu = root.at("idu");
  cfg.idu.outer_iterations = idu.at("outer_iterations").integer();
  cfg.idu.d = idu.at("d").integer();
  cfg.idu.n = idu.at("n").integer();

  const Reader editor = root.at("editor");
  cfg.editor.instruction = editor.at("instruction").string();
  const bool has_builtin = !editor.at("builtin").is_null();
  const bool has_remote = !editor.at("remote").is_null();
  if (has_builtin == has_remote) {
    throw InputError("config: exactly one of 'editor.builtin' and 'editor.remote' must be set");
  }
  if (has_builtin) {
    const Reader b = editor.at("builtin");
    cfg.editor.builtin_kind = b.at("kind").string();
    const json& params = b.raw().contains("params") ? b.raw()["params"] : json::object();
    if (!params.is_object()) throw InputError("config: 'editor.builtin.params' must be an object");
    for (auto it = params.begin(); it != params.end(); ++it) {
      cfg.editor.builtin_params[it.key()] =
          Reader(it.value(), "editor.builtin.params." + it.key()).number();
    }
  } else {
    cfg.editor.remote = read_endpoint(editor.at("remote"));
  }
  cfg.segmenter = root.at("segmenter").string();

  const Reader xf = root.at("transform");
  cfg.transform.scale = xf.at("scale").number();
  cfg.transform.axis = xf.at("axis").vec3();
  cfg.transform.angle_deg = xf.at("angle_deg").number();
  cfg.transform.translation = xf.at("translation").vec3();
  if (!xf.at("centroid").is_null()) cfg.transform.centroid = xf.at("centroid").vec3();

  cfg.compose_object = root.at("compose").at("object").string();
  if (!root.at("compose").at("background").is_null()) {
    cfg.compose_background = root.at("compose").at("background").string();
  }
  cfg.render_samples = root.at("render").at("samples_per_ray").integer();
  if (root.at("render").at("background").is_null()) {
    cfg.render_background.reset();
  } else {
    cfg.render_background = root.at("render").at("background").vec3();
  }
  if (!root.at("eval").at("renders").is_null()) {
    cfg.eval_renders = root.at("eval").at("renders").string();
  }
  return cfg;
}

}  // namespace

void PipelineConfig::validate() const {
  scene.validate();
  if (remote_inpainter) remote_inpainter->validate();
  train_object.validate();
  train_background.validate();
  idu.validate();
  if (editor.instruction.empty()) throw InputError("config: 'editor.instruction' must be nonempty");
  if (editor.builtin_kind.has_value() == editor.remote.has_value()) {
    throw InputError("config: exactly one editor must be selected");
  }
  if (editor.builtin_kind) builtin_editor(*editor.builtin_kind, editor.builtin_params);
  if (editor.remote) editor.remote->validate();
  if (segmenter != "known_mask" && segmenter != "alpha_threshold") {
    throw InputError("config: 'segmenter' must be 'known_mask' or 'alpha_threshold'");
  }
  if (!(transform.scale > 0.0)) throw InputError("config: 'transform.scale' must be > 0");
  if (!(transform.axis.norm() > 0.0)) throw InputError("config: 'transform.axis' must be nonzero");
  if (render_samples < 2) throw InputError("config: 'render.samples_per_ray' must be >= 2");
  if (compose_object != "auto" && compose_object != "original" && compose_object != "edited" &&
      !std::filesystem::exists(compose_object)) {
    throw InputError("config: compose.object checkpoint not found: " + compose_object);
  }
  if (compose_background && !std::filesystem::exists(*compose_background)) {
    throw InputError("config: compose.background checkpoint not found: " +
                     compose_background->string());
  }
}

std::string default_config_json() { return default_document().dump(2) + "\n"; }

PipelineConfig load_config(const std::optional<std::string>& json_text,
                           const std::vector<std::pair<std::string, std::string>>& overrides) {
  json doc = default_document();
  if (json_text) merge_into(doc, parse_document(*json_text, "config"), "");

  for (const auto& [path, raw] : overrides) {
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;
    }
    json& slot = lookup(doc, path);
    if (slot.is_object() && value.is_object() && !is_free_form(path)) {
      merge_into(slot, value, path);
    } else {
      slot = value;
    }
  }

  const json& scene_path = doc["scene"]["path"];
  if (!scene_path.is_null()) {
    if (!scene_path.is_string()) throw InputError("config: 'scene.path' must be a string");
    const std::filesystem::path p = scene_path.get<std::string>();
    if (!std::filesystem::exists(p)) throw InputError("config: scene file not found: " + p.string());
    const auto bytes = read_file(p);
    json scene = default_document()["scene"];
    merge_into(scene, parse_document(std::string(bytes.begin(), bytes.end()), p.string()), "scene");
    // Keys given inline or on the command line still win over the file.
    json inline_scene = doc["scene"];
    const json defaults = default_document()["scene"];
    for (auto it = inline_scene.begin(); it != inline_scene.end(); ++it) {
      if (it.key() != "path" && it.value() != defaults[it.key()]) scene[it.key()] = it.value();
    }
    doc["scene"] = scene;
  }

  PipelineConfig cfg = read_config(doc);
  cfg.validate();
  return cfg;
}

}  // namespace radiant::cli
