// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "radiant/camera.hpp"
#include "radiant/transform.hpp"
#include "radiant/voxel_field.hpp"
#include "support.hpp"

namespace radiant {
namespace {

TEST(VoxelField, ConstantFieldInterpolatesToConstant) {
  VoxelField f({5, 6, 7}, {}, 3.0, Vec3(0.2, 0.4, 0.6));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    const FieldValue v = trilinear_query(f, Vec3(u(rng), u(rng), u(rng)));
    EXPECT_NEAR(v.density, 3.0, 1e-12);
    EXPECT_NEAR((v.color - Vec3(0.2, 0.4, 0.6)).norm(), 0.0, 1e-12);
  }
}

TEST(VoxelField, QueryAtNodeReturnsStoredValue) {
  const VoxelField f = testing::random_field({4, 5, 6}, 3);
  for (int k = 0; k < 6; ++k) {
    for (int j = 0; j < 5; ++j) {
      for (int i = 0; i < 4; ++i) {
        const std::int64_t v = f.index(i, j, k);
        const FieldValue q = f.query(f.voxel_position(i, j, k));
        EXPECT_NEAR(q.density, f.density(v), 1e-12);
        EXPECT_NEAR((q.color - f.color(v)).norm(), 0.0, 1e-12);
      }
    }
  }
}

TEST(VoxelField, MidpointOfTwoNodes) {
  VoxelField f({4, 4, 4}, {});
  f.density(f.index(1, 2, 2)) = 2.0;
  f.density(f.index(2, 2, 2)) = 6.0;
  const Vec3 mid = 0.5 * (f.voxel_position(1, 2, 2) + f.voxel_position(2, 2, 2));
  EXPECT_NEAR(f.query(mid).density, 4.0, 1e-12);
}

TEST(VoxelField, OutsideBoundsIsEmpty) {
  const VoxelField f({3, 3, 3}, {}, 5.0, Vec3::Ones());
  for (const Vec3& p : {Vec3(1.01, 0, 0), Vec3(0, -1.5, 0), Vec3(0, 0, 7)}) {
    const FieldValue v = f.query(p);
    EXPECT_EQ(v.density, 0.0);
    EXPECT_EQ(v.color, Vec3::Zero());
  }
  // The max corner itself is inside.
  EXPECT_NEAR(f.query(Vec3::Ones()).density, 5.0, 1e-12);
}

TEST(VoxelField, LipschitzWithinCell) {
  const VoxelField f = testing::random_field({5, 5, 5}, 11);
  const Vec3 h = f.spacing();
  // Per-axis bound from the largest neighboring node difference.
  Vec3 slope = Vec3::Zero();
  for (int k = 0; k < 5; ++k) {
    for (int j = 0; j < 5; ++j) {
      for (int i = 0; i < 5; ++i) {
        const double d = f.density(f.index(i, j, k));
        if (i < 4) slope.x() = std::max(slope.x(), std::abs(f.density(f.index(i + 1, j, k)) - d) / h.x());
        if (j < 4) slope.y() = std::max(slope.y(), std::abs(f.density(f.index(i, j + 1, k)) - d) / h.y());
        if (k < 4) slope.z() = std::max(slope.z(), std::abs(f.density(f.index(i, j, k + 1)) - d) / h.z());
      }
    }
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 500; ++n) {
    const Vec3 base = f.voxel_position(n % 4, (n / 4) % 4, (n / 16) % 4);
    const Vec3 p = base + Vec3(u(rng), u(rng), u(rng)).cwiseProduct(h);
    const Vec3 q = base + Vec3(u(rng), u(rng), u(rng)).cwiseProduct(h);
    const double bound = slope.dot((p - q).cwiseAbs());
    EXPECT_LE(std::abs(f.query(p).density - f.query(q).density), bound + 1e-12);
  }
}

TEST(VoxelField, RejectsInvalidShape) {
  EXPECT_THROW(VoxelField({1, 4, 4}, {}), InputError);
  EXPECT_THROW(VoxelField({4, 4, 4}, {Vec3(0, 0, 0), Vec3(1, 0, 1)}), InputError);
}

TEST(VoxelField, ClampRestoresInvariants) {
  VoxelField f({2, 2, 2}, {});
  f.density(0) = -1.0;
  f.set_color(1, Vec3(-0.5, 0.5, 1.5));
  f.clamp();
  EXPECT_EQ(f.density(0), 0.0);
  EXPECT_EQ(f.color(1), Vec3(0.0, 0.5, 1.0));
}

TEST(Srt, IdentityMapsPointToItself) {
  const SrtTransform x = SrtTransform::identity();
  EXPECT_EQ(srt_world_to_canonical(Vec3(1, 2, 3), x), Vec3(1, 2, 3));
  EXPECT_TRUE(x.is_identity());
}

TEST(Srt, ScaleTwoHalvesOffsets) {
  SrtTransform x;
  x.scale = 2.0;
  EXPECT_NEAR((srt_world_to_canonical(Vec3(1, 0, 0), x) - Vec3(0.5, 0, 0)).norm(), 0.0, 1e-15);
}

TEST(Srt, QuarterTurnAboutZ) {
  SrtTransform x;
  x.rotation = rotation_from_axis_angle(Vec3::UnitZ(), 90.0);
  EXPECT_NEAR((srt_world_to_canonical(Vec3(0, 1, 0), x) - Vec3(1, 0, 0)).norm(), 0.0, 1e-12);
}

TEST(Srt, RoundTripRandomTransforms) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 200; ++n) {
    SrtTransform x;
    x.scale = 0.2 + 3.0 * (u(rng) + 1.0);
    x.rotation = rotation_from_axis_angle(Vec3(u(rng), u(rng), u(rng)), 180.0 * u(rng));
    x.translation = Vec3(u(rng), u(rng), u(rng));
    x.centroid = Vec3(u(rng), u(rng), u(rng));
    x.validate();
    const Vec3 p(3 * u(rng), 3 * u(rng), 3 * u(rng));
    EXPECT_LT((srt_world_to_canonical(srt_canonical_to_world(p, x), x) - p).norm(), 1e-9);
  }
}

TEST(Srt, DensityCorrection) {
  SrtTransform x;
  EXPECT_EQ(srt_density_correction(x), 1.0);
  x.scale = 2.0;
  EXPECT_EQ(srt_density_correction(x), 0.5);
  x.scale = 0.5;
  EXPECT_EQ(srt_density_correction(x), 2.0);
}

TEST(Srt, ValidationRejectsBadFactors) {
  SrtTransform x;
  x.scale = 0.0;
  EXPECT_THROW(x.validate(), InputError);
  x.scale = 1.0;
  x.rotation = Mat3::Identity();
  x.rotation(0, 0) = -1.0;  // reflection
  EXPECT_THROW(x.validate(), InputError);
}

TEST(Srt, RigidMatrixMatchesForwardMapWithoutScale) {
  SrtTransform x;
  x.rotation = rotation_from_axis_angle(Vec3(1, 2, 3), 40.0);
  x.translation = Vec3(0.1, -0.2, 0.3);
  x.centroid = Vec3(0.4, 0.5, -0.6);
  const Vec3 p(0.3, 0.2, 0.1);
  const Vec3 viaMatrix = (x.rigid_matrix() * p.homogeneous()).head<3>();
  EXPECT_LT((viaMatrix - x.canonical_to_world(p)).norm(), 1e-12);
}

TEST(Rotation, AxisAngleIsProperRotation) {
  const Mat3 r = rotation_from_axis_angle(Vec3(0.3, -1.0, 2.0), 73.0);
  EXPECT_TRUE(is_rotation(r));
  EXPECT_EQ(rotation_from_axis_angle(Vec3::Zero(), 30.0), Mat3::Identity());
}

TEST(Camera, ValidationRejectsBadIntrinsicsAndPose) {
  Camera c;
  EXPECT_NO_THROW(c.validate());
  c.fx = 0.0;
  EXPECT_THROW(c.validate(), InputError);
  c.fx = 1.0;
  c.cam_to_world(0, 0) = 2.0;
  EXPECT_THROW(c.validate(), InputError);
}

TEST(Camera, LookAtPointsForwardAtTarget) {
  const Vec3 eye(2, 1, 1.5), target(0, 0, -0.2);
  const Camera c = look_at_camera(eye, target, Vec3::UnitZ(), 32, 24, 40.0);
  c.validate();
  EXPECT_LT((c.rotation().col(2) - (target - eye).normalized()).norm(), 1e-12);
  // Image "down" has a negative world-up component.
  EXPECT_LT(c.rotation().col(1).z(), 0.0);
  EXPECT_LT((c.position() - eye).norm(), 1e-15);
}

TEST(Camera, RigidInverse) {
  const Camera c = look_at_camera(Vec3(1, 2, 3), Vec3::Zero(), Vec3::UnitZ(), 8, 8, 50.0);
  EXPECT_LT((rigid_inverse(c.cam_to_world) * c.cam_to_world - Mat4::Identity()).norm(), 1e-12);
}

TEST(Image, MaskValuesAreBinaryAfterThreshold) {
  ScalarImage alpha(4, 1);
  alpha.pixels = {0.0, 0.4, 0.6, 1.0};
  const MaskImage m = mask_from_alpha(alpha, 0.5);
  for (auto v : m.pixels) EXPECT_TRUE(v == 0 || v == 1);
}

TEST(Image, RejectsEmptyDimensions) {
  EXPECT_THROW(RgbImage(0, 3), InputError);
}

TEST(Image, ByteQuantizationRoundTrips) {
  for (int b = 0; b < 256; ++b) EXPECT_EQ(to_byte(from_byte(static_cast<std::uint8_t>(b))), b);
  EXPECT_EQ(to_byte(-0.2), 0);
  EXPECT_EQ(to_byte(1.7), 255);
}

}  // namespace
}  // namespace radiant
