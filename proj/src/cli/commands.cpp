// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <ostream>

#include "radiant/cli.hpp"
#include "radiant/io.hpp"
#include "radiant/render.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace radiant::cli {

namespace fs = std::filesystem;

namespace {

// Stream ids for derive_seed(cfg.seed, ...).
constexpr std::uint64_t kSceneSeed = 10;
constexpr std::uint64_t kObjectTrainSeed = 20;
constexpr std::uint64_t kBackgroundTrainSeed = 21;
constexpr std::uint64_t kIduSeed = 30;
constexpr std::uint64_t kIduTrainSeed = 31;
constexpr std::uint64_t kRenderSeed = 40;

void say(const PipelineConfig& cfg, std::ostream& log, const std::string& line) {
  if (!cfg.quiet) log << line << '\n' << std::flush;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw InputError("cannot create output directory " + dir.string() +
                     (ec ? ": " + ec.message() : ""));
  }
}

void require_exists(const fs::path& p, const std::string& what) {
  if (!fs::exists(p)) throw InputError("missing " + what + ": " + p.string());
}

std::string view_name(std::size_t v) { return fmt::format("{:03d}", v); }

RenderConfig output_render_config(const PipelineConfig& cfg, const DatasetMeta& meta) {
  RenderConfig rc;
  rc.samples_per_ray = cfg.render_samples;
  rc.jitter = false;
  rc.background = cfg.render_background;
  rc.rng_seed = derive_seed(cfg.seed, kRenderSeed);
  rc.near = meta.near;
  rc.far = meta.far;
  return rc;
}

// Metrics log: one "iteration loss psnr [depth_mae]" record per line.
class MetricsLog {
 public:
  MetricsLog(std::string header, bool depth) : depth_(depth) { text_ = header; }

  void add(const StepMetrics& m) {
    text_ += fmt::format("{} {} {}", m.iteration, format_double(m.loss), format_double(m.psnr));
    if (depth_) text_ += " " + format_double(m.depth_mae);
    text_ += '\n';
  }
  void comment(const std::string& line) { text_ += "# " + line + '\n'; }
  void write(const fs::path& path) const { write_text(path, text_); }

 private:
  bool depth_;
  std::string text_;
};

TrainConfig seeded(TrainConfig t, std::uint64_t seed, std::uint64_t stream) {
  t.rng_seed = derive_seed(seed, stream);
  return t;
}

fs::path object_checkpoint_for_compose(const PipelineConfig& cfg, const OutputLayout& out) {
  const fs::path original = out.checkpoint("object");
  const fs::path edited = out.checkpoint("object_edited");
  if (cfg.compose_object == "original") return original;
  if (cfg.compose_object == "edited") return edited;
  if (cfg.compose_object == "auto") return fs::exists(edited) ? edited : original;
  return cfg.compose_object;
}

}  // namespace

void cmd_gen_data(const PipelineConfig& cfg, std::ostream& log) {
  cfg.scene.validate();
  const OutputLayout out{cfg.out};
  ensure_dir(cfg.out);

  const SceneFields fields = generate_scene(cfg.scene, derive_seed(cfg.seed, kSceneSeed));
  const std::vector<Camera> cameras = orbit_cameras(cfg.scene.rig);
  const DatasetMeta meta = scene_meta(cameras, cfg.scene.bounds);
  const RenderConfig rc = ground_truth_render_config(cfg.scene, meta);

  const MultiViewDataset full =
      render_dataset(fields.full, fields.object, cameras, meta, rc, ImageKind::kRgb);
  const MultiViewDataset object =
      render_dataset(fields.object, fields.object, cameras, meta, rc, ImageKind::kRgba);
  const MultiViewDataset background =
      render_dataset(fields.background, fields.object, cameras, meta, rc, ImageKind::kRgb);

  MultiViewDataset inpainted = background;
  for (std::size_t v = 0; v < full.size(); ++v) {
    RgbImage filled;
    if (cfg.remote_inpainter) {
      try {
        filled = remote_inpaint(*cfg.remote_inpainter, rgb_of(full.views[v].image),
                                *full.views[v].mask);
      } catch (const Error& e) {
        throw Error("inpainting view " + std::to_string(v) + ": " + e.what(), e.exit_code());
      }
    } else {
      filled = oracle_inpaint(v, full, fields.background, rc);
    }
    inpainted.views[v].image = apply_mask(filled, MaskImage(filled.width, filled.height, 1));
  }

  save_dataset(out.data("full"), full);
  save_dataset(out.data("object"), object);
  save_dataset(out.data("background"), background);
  save_dataset(out.data("inpainted"), inpainted);
  ensure_dir(out.root / "data" / "gt");
  save_checkpoint(out.ground_truth("full"), fields.full);
  save_checkpoint(out.ground_truth("object"), fields.object);
  save_checkpoint(out.ground_truth("background"), fields.background);

  say(cfg, log,
      fmt::format("gen-data: {} views {}x{}, images + masks + depth + cameras -> {}",
                  full.size(), cfg.scene.rig.image_width, cfg.scene.rig.image_height,
                  (out.root / "data").string()));
  say(cfg, log,
      fmt::format("gen-data: datasets full, object (rgba), background, inpainted ({})",
                  cfg.remote_inpainter ? "remote" : "oracle"));
}

void cmd_train(const PipelineConfig& cfg, TrainTarget target, std::ostream& log) {
  const OutputLayout out{cfg.out};
  const bool object = target == TrainTarget::kObject;
  const std::string name = object ? "object" : "background";
  const fs::path data_dir = out.data(object ? "object" : "inpainted");
  require_exists(data_dir, object ? "object dataset" : "inpainted background images");
  const MultiViewDataset dataset = load_dataset(data_dir);
  if (object && !dataset.has_alpha) {
    throw InputError("object dataset " + data_dir.string() + " has no alpha channel");
  }

  const TrainConfig tc = object
                             ? seeded(cfg.train_object, cfg.seed, kObjectTrainSeed)
                             : seeded(cfg.train_background, cfg.seed, kBackgroundTrainSeed);
  MetricsLog metrics(object ? "# iteration loss psnr\n" : "# iteration loss psnr depth_mae\n",
                     !object);
  const int every = std::max(1, tc.iterations / 10);
  const MetricsSink sink = [&](const StepMetrics& m) {
    metrics.add(m);
    if (m.iteration % every == 0 || m.iteration == tc.iterations) {
      say(cfg, log,
          fmt::format("train {}: iteration {}/{} loss {:.6f} psnr {:.2f}", name, m.iteration,
                      tc.iterations, m.loss, m.psnr));
    }
  };

  ensure_dir(out.root / "logs");
  ensure_dir(out.root / "checkpoints");
  VoxelField field = [&] {
    try {
      return object ? train_object_field(dataset, tc, std::nullopt, sink)
                    : train_background_field(dataset, tc, std::nullopt, sink);
    } catch (const DivergenceError&) {
      metrics.comment("divergence");
      metrics.write(out.log("train_" + name));
      throw;
    }
  }();
  metrics.write(out.log("train_" + name));
  save_checkpoint(out.checkpoint(name), field);
  say(cfg, log, "train " + name + ": wrote " + out.checkpoint(name).string());
}

void cmd_edit(const PipelineConfig& cfg, std::ostream& log) {
  const OutputLayout out{cfg.out};
  require_exists(out.checkpoint("object"), "object checkpoint");
  require_exists(out.data("object"), "object dataset");
  VoxelField field = load_checkpoint(out.checkpoint("object"));
  const MultiViewDataset object_views = load_dataset(out.data("object"));

  std::unique_ptr<Editor> editor = cfg.editor.remote
                                       ? remote_editor(*cfg.editor.remote)
                                       : builtin_editor(*cfg.editor.builtin_kind,
                                                        cfg.editor.builtin_params);
  std::unique_ptr<Segmenter> segmenter = cfg.segmenter == "alpha_threshold"
                                             ? alpha_threshold_segmenter()
                                             : known_mask_segmenter();
  const EditInstruction instruction{cfg.editor.instruction, cfg.editor.builtin_params};
  IduSchedule schedule = cfg.idu;
  schedule.rng_seed = derive_seed(cfg.seed, kIduSeed);
  const TrainConfig tc = seeded(cfg.train_object, cfg.seed, kIduTrainSeed);

  MetricsLog metrics("", false);
  metrics.comment(fmt::format("idu outer_iterations={} d={} n={}", schedule.outer_iterations,
                              schedule.d, schedule.n));
  metrics.comment("editor=" + (cfg.editor.remote ? "remote " + cfg.editor.remote->base_url
                                                 : *cfg.editor.builtin_kind) +
                  " instruction=\"" + cfg.editor.instruction + "\"");
  metrics.comment("iteration loss psnr");

  RenderConfig rc = output_render_config(cfg, object_views.meta);
  rc.background = Vec3::Zero();
  const IduObserver observer = [&](int outer, const VoxelField& f, const IduDataset& ds) {
    double alignment = 0.0;
    Vec3 color_sum = Vec3::Zero();
    double count = 0.0;
    for (const DatasetView& view : ds.current.views) {
      const RenderedView r = render_view(f, view.camera, rc);
      alignment += psnr(r.rgb, alpha_blend_black(view.image));
      for (std::size_t i = 0; i < r.rgb.size(); ++i) {
        if ((*view.mask)[i]) {
          color_sum += r.rgb[i];
          count += 1.0;
        }
      }
    }
    alignment /= static_cast<double>(ds.size());
    const Vec3 mean = count > 0 ? Vec3(color_sum / count) : Vec3::Zero();
    metrics.comment(fmt::format("outer {} edit_alignment {} mean_color {} {} {}", outer,
                                format_double(alignment), format_double(mean.x()),
                                format_double(mean.y()), format_double(mean.z())));
    say(cfg, log,
        fmt::format("edit: outer {}/{} edit_alignment {:.2f} dB mean color ({:.3f}, {:.3f}, {:.3f})",
                    outer, schedule.outer_iterations, alignment, mean.x(), mean.y(), mean.z()));
  };

  ensure_dir(out.root / "logs");
  ensure_dir(out.root / "checkpoints");
  IduResult result = [&] {
    try {
      return idu_run(std::move(field), make_idu_dataset(object_views), *editor, *segmenter,
                     instruction, schedule, tc, observer,
                     [&](const StepMetrics& m) { metrics.add(m); });
    } catch (const Error& e) {
      metrics.comment(std::string("failed: ") + e.what());
      metrics.write(out.log("edit"));
      throw;
    }
  }();
  metrics.write(out.log("edit"));
  save_checkpoint(out.checkpoint("object_edited"), result.field);
  save_dataset(out.data("edited"), result.dataset.current);
  say(cfg, log, "edit: wrote " + out.checkpoint("object_edited").string());
}

void cmd_compose(const PipelineConfig& cfg, std::ostream& log) {
  const OutputLayout out{cfg.out};
  const fs::path object_path = object_checkpoint_for_compose(cfg, out);
  const fs::path bkg_path = cfg.compose_background.value_or(out.checkpoint("background"));
  require_exists(object_path, "object checkpoint");
  require_exists(bkg_path, "background checkpoint");
  require_exists(out.data("full"), "scene dataset");
  const VoxelField object = load_checkpoint(object_path);
  const VoxelField background = load_checkpoint(bkg_path);
  const MultiViewDataset scene = load_dataset(out.data("full"));

  SrtTransform xf;
  xf.scale = cfg.transform.scale;
  xf.rotation = rotation_from_axis_angle(cfg.transform.axis, cfg.transform.angle_deg);
  xf.translation = cfg.transform.translation;
  xf.centroid = cfg.transform.centroid ? *cfg.transform.centroid : object_centroid(object);
  const RenderConfig rc = output_render_config(cfg, scene.meta);

  const fs::path dir = out.renders();
  ensure_dir(dir);
  for (const auto& entry : fs::directory_iterator(dir)) fs::remove(entry.path());
  for (std::size_t v = 0; v < scene.size(); ++v) {
    const RenderedView r = render_merged(object, background, xf, scene.views[v].camera, rc);
    write_file(dir / (view_name(v) + ".png"), encode_png(r.rgb));
    write_pfm(dir / (view_name(v) + ".pfm"), r.depth);
  }
  say(cfg, log,
      fmt::format("compose: {} views from {} + {} -> {}", scene.size(),
                  object_path.filename().string(), bkg_path.filename().string(), dir.string()));
}

void cmd_eval(const PipelineConfig& cfg, std::ostream& log) {
  const OutputLayout out{cfg.out};
  const fs::path renders = cfg.eval_renders.value_or(out.renders());
  require_exists(renders, "renders directory");
  require_exists(out.ground_truth("full"), "ground-truth scene field");
  require_exists(out.data("full"), "scene dataset");
  require_exists(out.data("object"), "object dataset");
  const fs::path object_path = object_checkpoint_for_compose(cfg, out);
  require_exists(object_path, "object checkpoint");

  const VoxelField gt = load_checkpoint(out.ground_truth("full"));
  const VoxelField object = load_checkpoint(object_path);
  const MultiViewDataset scene = load_dataset(out.data("full"));
  const MultiViewDataset object_views = load_dataset(out.data("object"));
  const RenderConfig rc = output_render_config(cfg, scene.meta);
  RenderConfig transparent = rc;
  transparent.background.reset();

  nlohmann::json per_view = nlohmann::json::array();
  std::vector<RgbImage> frames;
  double psnr_sum = 0.0, leak_sum = 0.0, iou_sum = 0.0;
  for (std::size_t v = 0; v < scene.size(); ++v) {
    const fs::path png = renders / (view_name(v) + ".png");
    require_exists(png, "render");
    RgbImage frame = decode_png_rgb(read_file(png));
    const RgbImage truth = quantize(render_view(gt, scene.views[v].camera, rc).rgb);
    const double p = psnr(frame, truth);
    per_view.push_back(p);
    psnr_sum += p;

    const RenderedView obj = render_view(object, scene.views[v].camera, transparent);
    const MaskImage& gt_mask = *object_views.views[v].mask;
    leak_sum += leakage(obj.alpha, gt_mask);
    iou_sum += mask_iou(mask_from_alpha(obj.alpha, 0.5), gt_mask);
    frames.push_back(std::move(frame));
  }
  double temporal = 0.0;
  for (std::size_t v = 0; v + 1 < frames.size(); ++v) temporal += psnr(frames[v], frames[v + 1]);
  temporal /= static_cast<double>(std::max<std::size_t>(1, frames.size() - 1));

  const double n = static_cast<double>(scene.size());
  nlohmann::json report = {{"psnr_per_view", per_view},
                           {"mean_psnr", psnr_sum / n},
                           {"leakage", leak_sum / n},
                           {"mask_iou", iou_sum / n},
                           {"temporal_consistency", temporal}};
  write_text(out.report(), report.dump(2) + "\n");
  say(cfg, log,
      fmt::format("eval: mean_psnr {:.2f} dB leakage {:.4f} mask_iou {:.4f} temporal {:.2f} dB",
                  psnr_sum / n, leak_sum / n, iou_sum / n, temporal));
}

void cmd_pipeline(const PipelineConfig& cfg, std::ostream& log) {
  cmd_gen_data(cfg, log);
  cmd_train(cfg, TrainTarget::kObject, log);
  cmd_train(cfg, TrainTarget::kBackground, log);
  cmd_edit(cfg, log);
  cmd_compose(cfg, log);
  cmd_eval(cfg, log);
}

}  // namespace radiant::cli
