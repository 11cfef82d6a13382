// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <limits>
#include <random>

#include "radiant/optimizer.hpp"
#include "radiant/synth.hpp"
#include "support.hpp"

namespace radiant {
namespace {

double rel_err(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

TEST(PhotometricLoss, Examples) {
  const Rgba t{Vec3(1, 0, 0), 0.5};
  EXPECT_EQ(blended_photometric_loss(Vec3(0.5, 0.5, 0), 0.7, t, Vec3(0, 1, 0)), 0.0);
  EXPECT_NEAR(blended_photometric_loss(Vec3::Zero(), 0.0, t, Vec3(0, 1, 0)), 0.5 / 3.0, 1e-12);
  EXPECT_NEAR(blended_photometric_loss(Vec3::Zero(), 0.0, t, Vec3(0, 1, 0)), 0.16667, 1e-5);
  // A transparent target only sees the background.
  const Rgba clear_a{Vec3(1, 1, 1), 0.0}, clear_b{Vec3(0, 0.3, 0.9), 0.0};
  const Vec3 pred(0.2, 0.4, 0.6), bg(0.1, 0.5, 0.7);
  EXPECT_EQ(blended_photometric_loss(pred, 0.3, clear_a, bg),
            blended_photometric_loss(pred, 0.3, clear_b, bg));
}

TEST(PhotometricLoss, GradientMatchesDifferences) {
  const Rgba t{Vec3(0.3, 0.8, 0.1), 0.6};
  const Vec3 bg(0.9, 0.2, 0.4), pred(0.5, 0.5, 0.5);
  Vec3 g;
  blended_photometric_loss(pred, 0.5, t, bg, &g);
  for (int c = 0; c < 3; ++c) {
    Vec3 hi = pred, lo = pred;
    hi[c] += 1e-6;
    lo[c] -= 1e-6;
    const double fd = (blended_photometric_loss(hi, 0.5, t, bg) -
                       blended_photometric_loss(lo, 0.5, t, bg)) / 2e-6;
    EXPECT_NEAR(g[c], fd, 1e-8);
  }
}

TEST(DepthLoss, Examples) {
  EXPECT_EQ(depth_loss(2.0, 2.0, true), 0.0);
  EXPECT_EQ(depth_loss(1.0, 3.0, true), 4.0);
  double g = 7.0;
  EXPECT_EQ(depth_loss(1.0, 3.0, false, &g), 0.0);
  EXPECT_EQ(g, 0.0);
  depth_loss(1.0, 3.0, true, &g);
  EXPECT_EQ(g, -4.0);
}

RaySamples random_samples(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RaySamples s;
  double t = 0.5;
  for (int i = 0; i < n; ++i) {
    const double d = 0.02 + 0.1 * u(rng);
    s.push_back({t += d, d, 6.0 * u(rng), Vec3(u(rng), u(rng), u(rng)), SampleSource::kObject});
  }
  return s;
}

double probe_loss(const RaySamples& s, const CompositeGrad& w, const std::optional<Vec3>& bg) {
  const CompositeResult r = composite_ray(s, bg, 10.0);
  return w.rgb.dot(r.rgb) + w.alpha * r.alpha + w.depth * r.depth;
}

TEST(BackpropRay, ZeroUpstreamGivesZero) {
  std::mt19937_64 rng(1);
  const RaySamples s = random_samples(rng, 12);
  for (const SampleGrad& g : backprop_ray(s, CompositeGrad{}, Vec3(0.2, 0.2, 0.2), 10.0)) {
    EXPECT_EQ(g.density, 0.0);
    EXPECT_EQ(g.color, Vec3::Zero());
  }
}

TEST(BackpropRay, SingleSampleRedChannel) {
  const RaySamples s = {{1.0, 0.4, 2.5, Vec3(0.2, 0.3, 0.4), SampleSource::kObject}};
  CompositeGrad up;
  up.rgb = Vec3(1, 0, 0);
  const auto g = backprop_ray(s, up, std::nullopt, 10.0);
  EXPECT_NEAR(g[0].color.x(), 1.0 - std::exp(-2.5 * 0.4), 1e-15);
  EXPECT_EQ(g[0].color.y(), 0.0);
  // d(w c) / d sigma = delta e^{-sigma delta} c
  EXPECT_NEAR(g[0].density, 0.4 * std::exp(-1.0) * 0.2, 1e-15);
}

TEST(BackpropRay, MatchesCentralDifferences) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0, ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    RaySamples s = random_samples(rng, 1 + trial % 24);
    CompositeGrad up;
    up.rgb = Vec3(u(rng), u(rng), u(rng));
    up.alpha = u(rng);
    up.depth = u(rng);
    const std::optional<Vec3> bg =
        trial % 2 ? std::optional<Vec3>(Vec3(0.3, 0.6, 0.9)) : std::nullopt;
    const auto g = backprop_ray(s, up, bg, 10.0);
    const double h = 1e-4;
    for (std::size_t i = 0; i < s.size(); ++i) {
      RaySamples p = s, m = s;
      p[i].density += h;
      m[i].density -= h;
      const double fd = (probe_loss(p, up, bg) - probe_loss(m, up, bg)) / (2 * h);
      ++checked;
      ok += rel_err(g[i].density, fd) < 1e-4;
      for (int c = 0; c < 3; ++c) {
        p = s;
        m = s;
        p[i].color[c] += h;
        m[i].color[c] -= h;
        const double fdc = (probe_loss(p, up, bg) - probe_loss(m, up, bg)) / (2 * h);
        ++checked;
        ok += rel_err(g[i].color[c], fdc) < 1e-4;
      }
    }
  }
  EXPECT_EQ(ok, checked);
}

struct GradProblem {
  VoxelField field;
  std::vector<TrainRay> rays;
  RenderConfig cfg;
  std::vector<Vec3> targets;
};

GradProblem make_problem(std::uint64_t seed, int n) {
  GradProblem p{testing::random_field({n, n, n}, seed, 3.0), {}, {}, {}};
  p.cfg.samples_per_ray = 24;
  p.cfg.jitter = true;
  p.cfg.rng_seed = seed;
  p.cfg.background = Vec3(0.4, 0.1, 0.7);
  std::mt19937_64 rng(seed + 100);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int r = 0; r < 16; ++r) {
    p.rays.push_back({testing::random_ray(rng), static_cast<std::uint64_t>(r)});
    p.targets.emplace_back(u(rng), u(rng), u(rng));
  }
  return p;
}

RayLossFn problem_loss(const GradProblem& p) {
  return [&p](std::size_t i, const CompositeResult& r, CompositeGrad& up) {
    const Vec3 d = r.rgb - p.targets[i];
    up.rgb = 2.0 * d;
    up.alpha = 0.3;
    up.depth = 2.0 * (r.depth - 2.5) * 0.1;
    return d.squaredNorm() + 0.3 * r.alpha + 0.1 * (r.depth - 2.5) * (r.depth - 2.5);
  };
}

TEST(FieldGradient, MatchesCentralDifferences) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    GradProblem p = make_problem(seed, 5);
    const RayLossFn loss = problem_loss(p);
    std::vector<double> grad(p.field.params().size(), 0.0);
    accumulate_field_gradient(p.field, p.rays, p.cfg, loss, grad);
    std::vector<double> scratch(grad.size());
    int ok = 0;
    const double h = 1e-4;
    for (std::size_t k = 0; k < grad.size(); ++k) {
      const double keep = p.field.params()[k];
      p.field.params()[k] = keep + h;
      const double lp = reference::accumulate_field_gradient(p.field, p.rays, p.cfg, loss, scratch);
      p.field.params()[k] = keep - h;
      const double lm = reference::accumulate_field_gradient(p.field, p.rays, p.cfg, loss, scratch);
      p.field.params()[k] = keep;
      ok += rel_err(grad[k], (lp - lm) / (2 * h)) < 1e-4;
    }
    EXPECT_GE(ok, static_cast<int>(std::ceil(0.99 * grad.size()))) << "seed " << seed;
  }
}

TEST(FieldGradient, ParallelMatchesReferenceForAnyThreadCount) {
  GradProblem p = make_problem(7, 8);
  for (auto& tr : p.rays) tr.stream += 1000;
  for (int i = 0; i < 200; ++i) p.rays.push_back(p.rays[i % 16]), p.targets.push_back(p.targets[i % 16]);
  const RayLossFn loss = problem_loss(p);
  std::vector<double> ref(p.field.params().size(), 0.0);
  const double lref = reference::accumulate_field_gradient(p.field, p.rays, p.cfg, loss, ref);
  const int saved = omp_get_max_threads();
  for (int threads : {1, 2, 3, 8}) {
    omp_set_num_threads(threads);
    std::vector<double> par(ref.size(), 0.0);
    const double lpar = accumulate_field_gradient(p.field, p.rays, p.cfg, loss, par);
    EXPECT_EQ(lpar, lref) << threads;
    EXPECT_EQ(par, ref) << threads;
  }
  omp_set_num_threads(saved);
}

TEST(FieldGradient, AddsIntoExistingBuffer) {
  GradProblem p = make_problem(4, 4);
  const RayLossFn loss = problem_loss(p);
  std::vector<double> once(p.field.params().size(), 0.0), twice(once.size(), 0.0);
  accumulate_field_gradient(p.field, p.rays, p.cfg, loss, once);
  accumulate_field_gradient(p.field, p.rays, p.cfg, loss, twice);
  accumulate_field_gradient(p.field, p.rays, p.cfg, loss, twice);
  for (std::size_t k = 0; k < once.size(); ++k) EXPECT_NEAR(twice[k], 2 * once[k], 1e-12);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  VoxelField f({2, 2, 2}, {}, 1.0, Vec3::Constant(0.5));
  std::vector<double> g(f.params().size(), 1.0);
  AdamState st;
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  adam_step(f, g, st, cfg);
  EXPECT_EQ(st.step, 1);
  for (std::int64_t v = 0; v < 8; ++v) {
    EXPECT_NEAR(f.density(v), 0.9, 1e-6);
    EXPECT_NEAR((f.color(v) - Vec3::Constant(0.4)).norm(), 0.0, 1e-6);
  }
}

TEST(Adam, SeparateDensityStep) {
  VoxelField f({2, 2, 2}, {}, 1.0, Vec3::Constant(0.5));
  std::vector<double> g(f.params().size(), -1.0);
  AdamState st;
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.density_learning_rate = 0.5;
  adam_step(f, g, st, cfg);
  EXPECT_NEAR(f.density(3), 1.5, 1e-6);
  EXPECT_NEAR(f.color(3).x(), 0.6, 1e-6);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  VoxelField f = testing::random_field({3, 3, 3}, 5);
  for (std::int64_t v = 0; v < 27; ++v) f.set_color(v, f.color(v).cwiseMin(1.0));
  const VoxelField before = f;
  std::vector<double> g(f.params().size(), 0.0);
  AdamState st;
  adam_step(f, g, st, TrainConfig{});
  EXPECT_EQ(f, before);
}

TEST(Adam, ClampsAfterStep) {
  VoxelField f({2, 2, 2}, {}, 0.0, Vec3::Constant(1.0));
  std::vector<double> g(f.params().size(), 0.0);
  for (std::int64_t v = 0; v < 8; ++v) {
    g[v * 4] = 5.0;       // pushes density below 0
    g[v * 4 + 1] = -5.0;  // pushes red above 1
  }
  AdamState st;
  adam_step(f, g, st, TrainConfig{});
  for (std::int64_t v = 0; v < 8; ++v) {
    EXPECT_EQ(f.density(v), 0.0);
    EXPECT_EQ(f.color(v).x(), 1.0);
  }
}

TEST(Adam, NonFiniteGradientDiverges) {
  VoxelField f({2, 2, 2}, {});
  std::vector<double> g(f.params().size(), 0.0);
  g[5] = std::numeric_limits<double>::quiet_NaN();
  AdamState st;
  try {
    adam_step(f, g, st, TrainConfig{});
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_STREQ(e.what(), "divergence");
  }
  g[5] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(adam_step(f, g, st, TrainConfig{}), DivergenceError);
}

TEST(InitialField, DensityAndGrey) {
  const VoxelField f = initial_field({3, 4, 5}, {});
  for (std::int64_t v = 0; v < 60; ++v) {
    EXPECT_EQ(f.density(v), 0.01);
    EXPECT_EQ(f.color(v), Vec3::Constant(0.5));
  }
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  c.rays_per_batch = 0;
  EXPECT_THROW(c.validate(), InputError);
  c = TrainConfig{};
  c.learning_rate = 0.0;
  EXPECT_THROW(c.validate(), InputError);
  c = TrainConfig{};
  c.adam_beta2 = 1.0;
  EXPECT_THROW(c.validate(), InputError);
}

// Small scene shared by the training-loop tests.
class TrainingFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    spec_ = new SceneSpec(testing::small_scene_spec());
    fields_ = new SceneFields(generate_scene(*spec_, 5));
    const auto cams = orbit_cameras(spec_->rig);
    const DatasetMeta meta = scene_meta(cams, spec_->bounds);
    const RenderConfig rc = ground_truth_render_config(*spec_, meta);
    object_ = new MultiViewDataset(
        render_dataset(fields_->object, fields_->object, cams, meta, rc, ImageKind::kRgba));
    background_ = new MultiViewDataset(render_dataset(fields_->background, fields_->background,
                                                      cams, meta, rc, ImageKind::kRgb));
  }
  static void TearDownTestSuite() {
    delete spec_;
    delete fields_;
    delete object_;
    delete background_;
  }

  static TrainConfig small_cfg() {
    TrainConfig c;
    c.iterations = 30;
    c.rays_per_batch = 256;
    c.samples_per_ray = 48;
    c.learning_rate = 0.05;
    c.density_learning_rate = 0.2;
    c.resolution = {24, 24, 24};
    c.rng_seed = 11;
    return c;
  }

  static SceneSpec* spec_;
  static SceneFields* fields_;
  static MultiViewDataset* object_;
  static MultiViewDataset* background_;
};

SceneSpec* TrainingFixture::spec_ = nullptr;
SceneFields* TrainingFixture::fields_ = nullptr;
MultiViewDataset* TrainingFixture::object_ = nullptr;
MultiViewDataset* TrainingFixture::background_ = nullptr;

TEST_F(TrainingFixture, ZeroIterationsReturnsInitialField) {
  TrainConfig c = small_cfg();
  c.iterations = 0;
  const VoxelField init = testing::random_field({6, 6, 6}, 3, 2.0, object_->meta.bounds);
  EXPECT_EQ(train_object_field(*object_, c, init), init);
  EXPECT_EQ(train_background_field(*background_, c, init), init);
}

TEST_F(TrainingFixture, EmptyDatasetIsAnError) {
  MultiViewDataset empty;
  EXPECT_THROW(train_object_field(empty, small_cfg()), InputError);
  EXPECT_THROW(train_background_field(empty, small_cfg()), InputError);
}

TEST_F(TrainingFixture, TracesAreDeterministic) {
  std::vector<StepMetrics> a, b;
  const VoxelField fa = train_object_field(*object_, small_cfg(), std::nullopt,
                                           [&](const StepMetrics& m) { a.push_back(m); });
  const VoxelField fb = train_object_field(*object_, small_cfg(), std::nullopt,
                                           [&](const StepMetrics& m) { b.push_back(m); });
  ASSERT_EQ(a.size(), 30u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].loss, b[i].loss);
    EXPECT_EQ(a[i].psnr, b[i].psnr);
  }
  EXPECT_EQ(fa, fb);
}

TEST_F(TrainingFixture, LossFiniteAndInvariantsHoldEveryStep) {
  for (FieldRole role : {FieldRole::kObject, FieldRole::kBackground}) {
    TrainConfig c = small_cfg();
    c.depth_loss_weight = 0.1;
    FieldTrainer t(role, initial_field(c.resolution, object_->meta.bounds), c,
                   object_->meta.near, object_->meta.far);
    const MultiViewDataset& data = role == FieldRole::kObject ? *object_ : *background_;
    for (int i = 0; i < 20; ++i) {
      const StepMetrics m = t.step(data);
      EXPECT_TRUE(std::isfinite(m.loss));
      EXPECT_GE(m.loss, 0.0);
      const VoxelField& f = t.field();
      for (std::int64_t v = 0; v < f.resolution().voxel_count(); ++v) {
        ASSERT_GE(f.density(v), 0.0);
        ASSERT_TRUE((f.color(v).array() >= 0.0).all() && (f.color(v).array() <= 1.0).all());
      }
    }
  }
}

TEST_F(TrainingFixture, ObjectLossDecreases) {
  TrainConfig c = small_cfg();
  c.iterations = 120;
  std::vector<double> losses;
  train_object_field(*object_, c, std::nullopt,
                     [&](const StepMetrics& m) { losses.push_back(m.loss); });
  double first = 0, last = 0;
  for (int i = 0; i < 10; ++i) first += losses[i], last += losses[110 + i];
  EXPECT_LT(last, 0.5 * first);
}

TEST_F(TrainingFixture, ZeroDepthWeightEqualsRgbOnly) {
  TrainConfig c = small_cfg();
  c.depth_loss_weight = 0.0;
  MultiViewDataset rgb_only = *background_;
  for (auto& v : rgb_only.views) v.depth.reset();
  std::vector<double> with, without;
  train_background_field(*background_, c, std::nullopt,
                         [&](const StepMetrics& m) { with.push_back(m.loss); });
  train_background_field(rgb_only, c, std::nullopt,
                         [&](const StepMetrics& m) { without.push_back(m.loss); });
  EXPECT_EQ(with, without);
}

TEST_F(TrainingFixture, DepthSupervisionReducesDepthError) {
  // Full-view depth error over the valid pixels, measured every 10 iterations.
  TrainConfig c = small_cfg();
  c.depth_loss_weight = 0.1;
  c.learning_rate = 0.01;
  c.rays_per_batch = 512;
  FieldTrainer t(FieldRole::kBackground, initial_field(c.resolution, background_->meta.bounds),
                 c, background_->meta.near, background_->meta.far);
  RenderConfig rc;
  rc.samples_per_ray = c.samples_per_ray;
  rc.near = background_->meta.near;
  rc.far = background_->meta.far;
  auto mae = [&] {
    double sum = 0;
    int n = 0;
    for (const auto& v : background_->views) {
      const RenderedView r = render_view(t.field(), v.camera, rc);
      for (std::size_t i = 0; i < r.depth.size(); ++i) {
        if ((*v.depth)[i] > 0) sum += std::abs(r.depth[i] - (*v.depth)[i]), ++n;
      }
    }
    return sum / n;
  };
  std::vector<double> trace{mae()};
  for (int w = 0; w < 6; ++w) {
    for (int i = 0; i < 10; ++i) t.step(*background_);
    trace.push_back(mae());
  }
  for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LT(trace[i], trace[i - 1]) << i;
}

}  // namespace
}  // namespace radiant
