// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0

#include "puzzlegen/geometry.hpp"

#include <cmath>

#include "puzzlegen/kernels.hpp"

namespace puzzlegen {

PointGrid unproject_pointmap(const CameraIntrinsics& intrinsics, const DepthMap& depth) {
  intrinsics.require_valid();
  PointGrid grid(depth.width, depth.height);
  kernels::active().unproject_grid(depth.values.data(), depth.width, depth.height, intrinsics.fx,
                                   intrinsics.fy, intrinsics.cx, intrinsics.cy, grid.xs.data(),
                                   grid.ys.data(), grid.zs.data());
  for (size_t i = 0; i < grid.size(); ++i) grid.valid[i] = depth.values[i] > 0.0 ? 1 : 0;
  return grid;
}

Vec3 unproject_pixel(const CameraIntrinsics& intrinsics, double u, double v, double depth) {
  return {(u - intrinsics.cx) / intrinsics.fx * depth, (v - intrinsics.cy) / intrinsics.fy * depth,
          depth};
}

PixelProjection project_point(const CameraIntrinsics& intrinsics, const Pose& w2c,
                              const Vec3& world_point) {
  const Vec3 p = w2c.rotation * world_point + w2c.translation;
  PixelProjection out;
  out.z = p.z();
  out.in_front = p.z() > kDepthEpsilon;
  if (out.in_front) {
    out.u = intrinsics.fx * (p.x() / p.z()) + intrinsics.cx;
    out.v = intrinsics.fy * (p.y() / p.z()) + intrinsics.cy;
  }
  return out;
}

Mat3 rodrigues(const Vec3& axis, double angle_rad) {
  if (std::abs(axis.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("rodrigues: axis must be unit length");
  }
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  Mat3 skew;
  skew << 0.0, -axis.z(), axis.y(), axis.z(), 0.0, -axis.x(), -axis.y(), axis.x(), 0.0;
  return c * Mat3::Identity() + s * skew + (1.0 - c) * (axis * axis.transpose());
}

Mat4 rotation_about_centroid(const Mat3& rotation, const Vec3& centroid) {
  Mat4 t = Mat4::Identity();
  t.block<3, 3>(0, 0) = rotation;
  t.block<3, 1>(0, 3) = centroid - rotation * centroid;
  return t;
}

Pose apply_rotation_to_pose(const Mat4& pose_c2w, const Mat4& t_rot) {
  const Mat4 composed = t_rot * pose_c2w;
  // Rigid inverse: [R | t]^-1 = [R^T | -R^T t].
  const Mat3 r = composed.block<3, 3>(0, 0);
  const Vec3 t = composed.block<3, 1>(0, 3);
  Pose out;
  out.rotation = r.transpose();
  out.translation = -(r.transpose() * t);
  return out;
}

Pose invert_pose(const Pose& pose) {
  Pose out;
  out.rotation = pose.rotation.transpose();
  out.translation = -(pose.rotation.transpose() * pose.translation);
  return out;
}

Pose compose_pose(const Pose& a, const Pose& b) {
  Pose out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

Mat4 pose_to_matrix(const Pose& pose) {
  Mat4 m = Mat4::Identity();
  m.block<3, 3>(0, 0) = pose.rotation;
  m.block<3, 1>(0, 3) = pose.translation;
  return m;
}

Pose pose_from_matrix(const Mat4& m) {
  Pose p;
  p.rotation = m.block<3, 3>(0, 0);
  p.translation = m.block<3, 1>(0, 3);
  return p;
}

Vec3 camera_center(const Pose& w2c) { return -(w2c.rotation.transpose() * w2c.translation); }

PointmapFrame build_pointmap_frame(Image8 rgb, DepthMap depth, const CameraIntrinsics& intrinsics,
                                   const Pose& w2c) {
  if (rgb.width != depth.width || rgb.height != depth.height) {
    throw InputError("pointmap frame: rgb and depth dimensions differ");
  }
  PointmapFrame frame;
  frame.width = depth.width;
  frame.height = depth.height;
  frame.intrinsics = intrinsics;
  frame.w2c = w2c;
  frame.points = unproject_pointmap(intrinsics, depth);
  const Pose c2w = invert_pose(w2c);
  double rot[9];
  double trans[3] = {c2w.translation.x(), c2w.translation.y(), c2w.translation.z()};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) rot[r * 3 + c] = c2w.rotation(r, c);
  kernels::active().transform_points(rot, trans, frame.points.xs.data(), frame.points.ys.data(),
                                     frame.points.zs.data(), frame.points.size(),
                                     frame.points.xs.data(), frame.points.ys.data(),
                                     frame.points.zs.data());
  // Invalid pixels keep a zero point so downstream code never reads the
  // transported camera origin by accident.
  for (size_t i = 0; i < frame.points.size(); ++i) {
    if (!frame.points.valid[i]) {
      frame.points.xs[i] = 0.0;
      frame.points.ys[i] = 0.0;
      frame.points.zs[i] = 0.0;
    }
  }
  frame.rgb = std::move(rgb);
  frame.depth = std::move(depth);
  return frame;
}

}  // namespace puzzlegen
