// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiant/camera.hpp"

#include <cmath>
#include <numbers>

#include "radiant/error.hpp"

namespace radiant {

void Camera::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw InputError("camera focal lengths must be > 0");
  if (width <= 0 || height <= 0) throw InputError("camera image size must be > 0");
  if (!is_rotation(rotation())) {
    throw InputError("camera rotation must be orthonormal with determinant +1");
  }
  const auto last = cam_to_world.row(3);
  if (last(0) != 0.0 || last(1) != 0.0 || last(2) != 0.0 || last(3) != 1.0) {
    throw InputError("camera pose must be an affine 4x4 transform");
  }
}

Camera look_at_camera(const Vec3& eye, const Vec3& target, const Vec3& up,
                      int width, int height, double fov_y_deg) {
  const Vec3 forward = (target - eye).normalized();
  const Vec3 right = forward.cross(up).normalized();
  const Vec3 down = forward.cross(right);

  Camera cam;
  cam.width = width;
  cam.height = height;
  cam.fy = 0.5 * height / std::tan(0.5 * fov_y_deg * std::numbers::pi / 180.0);
  cam.fx = cam.fy;
  cam.cx = 0.5 * width;
  cam.cy = 0.5 * height;
  cam.cam_to_world.setIdentity();
  cam.cam_to_world.block<3, 1>(0, 0) = right;
  cam.cam_to_world.block<3, 1>(0, 1) = down;
  cam.cam_to_world.block<3, 1>(0, 2) = forward;
  cam.cam_to_world.block<3, 1>(0, 3) = eye;
  return cam;
}

Mat4 rigid_inverse(const Mat4& m) {
  Mat4 out = Mat4::Identity();
  const Mat3 rt = m.topLeftCorner<3, 3>().transpose();
  out.topLeftCorner<3, 3>() = rt;
  out.topRightCorner<3, 1>() = -rt * m.topRightCorner<3, 1>();
  return out;
}

}  // namespace radiant
