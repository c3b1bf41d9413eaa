// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "puzzlegen/types.hpp"

namespace puzzlegen {

/// Intrinsics of a crop resized to out_w x out_h:
/// fx' = fx*sx, cx' = (cx - u1)*sx with sx = out_w / (u2 - u1), same in y.
/// The matching extrinsic is the source camera's own pose (identity in the
/// source camera frame).
CameraIntrinsics rescale_intrinsics(const CameraIntrinsics& k_full, const PatchBox& patch,
                                    int out_w, int out_h);

/// Shared per-clip intrinsics: principal point at the image center.
CameraIntrinsics fixed_patch_intrinsics(int out_w, int out_h, double fx, double fy);

struct Correspondence {
  Vec3 world;
  Vec2 pixel;
};

struct RansacConfig {
  double thresh_px = 2.0;
  int max_iters = 512;
  double min_inlier_frac = 0.5;
  double confidence = 0.999;
  uint64_t seed = 0;
};

struct PnpResult {
  Pose pose;  // world-to-camera
  std::vector<int> inliers;
  double rmse_px = 0.0;
};

/// Robust pose from 3D-2D correspondences: P3P minimal samples inside RANSAC,
/// then damped Gauss-Newton on the consensus set. Deterministic per seed.
/// Throws std::invalid_argument with fewer than 4 correspondences; returns
/// nullopt when the inlier fraction stays below the configured floor.
std::optional<PnpResult> solve_pnp_ransac(std::span<const Correspondence> correspondences,
                                          const CameraIntrinsics& intrinsics,
                                          const RansacConfig& cfg);

namespace detail {

/// Up to four world-to-camera poses consistent with three correspondences.
/// `bearings` are unit rays in the camera frame.
std::vector<Pose> solve_p3p(const std::array<Vec3, 3>& world,
                            const std::array<Vec3, 3>& bearings);

/// Gauss-Newton refinement of the reprojection error over the given subset.
/// The returned pose never has a higher subset RMSE than `init`.
Pose refine_pose(std::span<const Correspondence> correspondences,
                 const CameraIntrinsics& intrinsics, const Pose& init,
                 std::span<const int> subset);

double subset_rmse_px(std::span<const Correspondence> correspondences,
                      const CameraIntrinsics& intrinsics, const Pose& pose,
                      std::span<const int> subset);

}  // namespace detail

}  // namespace puzzlegen
