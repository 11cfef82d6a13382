// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

// Serial reference kernels against their OpenMP versions. The thread count is
// the benchmark argument; 0 means the serial reference.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "radiant/optimizer.hpp"
#include "radiant/render.hpp"
#include "radiant/synth.hpp"
#include "support.hpp"

namespace radiant {
namespace {

struct Workload {
  VoxelField field = testing::random_field({48, 48, 48}, 1, 6.0);
  VoxelField other = testing::random_field({48, 48, 48}, 2, 6.0);
  Camera camera = look_at_camera(Vec3(2.2, 1.4, 1.0), Vec3::Zero(), Vec3::UnitZ(), 64, 64, 40.0);
  RenderConfig cfg;
  std::vector<TrainRay> rays;
  std::vector<Vec3> targets;

  Workload() {
    cfg.samples_per_ray = 128;
    cfg.jitter = true;
    cfg.background = Vec3(0.2, 0.3, 0.4);
    cfg.near = 0.5;
    cfg.far = 4.5;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int r = 0; r < 2048; ++r) {
      rays.push_back({testing::random_ray(rng), static_cast<std::uint64_t>(r)});
      targets.emplace_back(u(rng), u(rng), u(rng));
    }
  }
};

const Workload& workload() {
  static const Workload w;
  return w;
}

void set_threads(benchmark::State& state) {
  if (state.range(0) > 0) omp_set_num_threads(static_cast<int>(state.range(0)));
}

void BM_RenderView(benchmark::State& state) {
  const Workload& w = workload();
  set_threads(state);
  for (auto _ : state) {
    RenderedView v = state.range(0) == 0 ? reference::render_view(w.field, w.camera, w.cfg)
                                         : render_view(w.field, w.camera, w.cfg);
    benchmark::DoNotOptimize(v.rgb.pixels.data());
  }
  state.SetItemsProcessed(state.iterations() * w.camera.width * w.camera.height);
}

void BM_RenderMerged(benchmark::State& state) {
  const Workload& w = workload();
  set_threads(state);
  SrtTransform xf;
  xf.scale = 0.8;
  xf.rotation = rotation_from_axis_angle(Vec3(0, 0, 1), 30.0);
  for (auto _ : state) {
    RenderedView v = state.range(0) == 0
                         ? reference::render_merged(w.field, w.other, xf, w.camera, w.cfg)
                         : render_merged(w.field, w.other, xf, w.camera, w.cfg);
    benchmark::DoNotOptimize(v.rgb.pixels.data());
  }
  state.SetItemsProcessed(state.iterations() * w.camera.width * w.camera.height);
}

void BM_FieldGradient(benchmark::State& state) {
  const Workload& w = workload();
  set_threads(state);
  const RayLossFn loss = [&w](std::size_t i, const CompositeResult& r, CompositeGrad& up) {
    const Vec3 d = r.rgb - w.targets[i];
    up.rgb = 2.0 * d;
    return d.squaredNorm();
  };
  std::vector<double> grad(w.field.params().size());
  for (auto _ : state) {
    std::fill(grad.begin(), grad.end(), 0.0);
    const double l =
        state.range(0) == 0
            ? reference::accumulate_field_gradient(w.field, w.rays, w.cfg, loss, grad)
            : accumulate_field_gradient(w.field, w.rays, w.cfg, loss, grad);
    benchmark::DoNotOptimize(l);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.rays.size()));
}

void thread_args(benchmark::internal::Benchmark* b) {
  b->ArgName("threads")->Arg(0);
  for (int t = 1; t <= omp_get_num_procs(); t *= 2) b->Arg(t);
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

BENCHMARK(BM_RenderView)->Apply(thread_args);
BENCHMARK(BM_RenderMerged)->Apply(thread_args);
BENCHMARK(BM_FieldGradient)->Apply(thread_args);

}  // namespace
}  // namespace radiant

BENCHMARK_MAIN();
