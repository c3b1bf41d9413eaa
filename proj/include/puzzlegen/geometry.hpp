// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "puzzlegen/types.hpp"

namespace puzzlegen {

inline constexpr double kDepthEpsilon = 1e-9;

struct PixelProjection {
  double u = 0.0;
  double v = 0.0;
  double z = 0.0;
  bool in_front = false;  // z > kDepthEpsilon
};

/// Per-pixel unprojection of a depth map into the camera frame.
/// Invalid (zero) depth leaves the pixel masked out.
PointGrid unproject_pointmap(const CameraIntrinsics& intrinsics, const DepthMap& depth);

/// Single-ray unprojection, camera frame.
Vec3 unproject_pixel(const CameraIntrinsics& intrinsics, double u, double v, double depth);

/// World point -> pixel + camera-frame depth under a world-to-camera pose.
/// Never throws on degenerate depth; `in_front` is false for z <= 1e-9.
PixelProjection project_point(const CameraIntrinsics& intrinsics, const Pose& w2c,
                              const Vec3& world_point);

/// Axis-angle rotation matrix. The axis must be unit length within 1e-9.
Mat3 rodrigues(const Vec3& axis, double angle_rad);

/// Homogeneous transform that rotates about a fixed centroid:
/// [R | c - R c; 0 1]. Maps the centroid to itself.
Mat4 rotation_about_centroid(const Mat3& rotation, const Vec3& centroid);

/// New world-to-camera pose after applying a rotation transform to the
/// camera-to-world pose: (t_rot * pose_c2w)^-1.
Pose apply_rotation_to_pose(const Mat4& pose_c2w, const Mat4& t_rot);

Pose invert_pose(const Pose& pose);
/// Composition a after b: (a ∘ b)(x) = a(b(x)).
Pose compose_pose(const Pose& a, const Pose& b);

Mat4 pose_to_matrix(const Pose& pose);
Pose pose_from_matrix(const Mat4& m);

/// Camera center in world coordinates: -R^T t.
Vec3 camera_center(const Pose& w2c);

/// Assembles a frame: unprojects depth and maps points into the world frame
/// through the inverse of `w2c`.
PointmapFrame build_pointmap_frame(Image8 rgb, DepthMap depth, const CameraIntrinsics& intrinsics,
                                   const Pose& w2c = {});

}  // namespace puzzlegen
