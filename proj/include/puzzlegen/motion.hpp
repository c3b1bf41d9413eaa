// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>

#include "puzzlegen/rng.hpp"
#include "puzzlegen/types.hpp"

namespace puzzlegen {

/// Rotation-angle sampler: uniform(theta_min, theta_max) plus Gaussian jitter,
/// clamped into [0, 180] degrees. Axis is isotropic on the unit sphere.
struct RotationSampler {
  double theta_min_deg = 30.0;
  double theta_max_deg = 90.0;
  double sigma_deg = 5.0;

  bool valid() const {
    return theta_min_deg >= 0.0 && theta_min_deg <= theta_max_deg && theta_max_deg <= 180.0 &&
           sigma_deg >= 0.0;
  }
};

struct AxisAngle {
  Vec3 axis;
  double angle_rad = 0.0;
};

AxisAngle sample_rotation(const RotationSampler& sampler, Rng& rng);

/// Fraction of points whose normal faces the camera center within the angular
/// threshold. `points` and `normals` are aligned; callers pass only samples
/// that carry a valid normal. Throws std::invalid_argument when empty.
double front_coverage(const PointSet& points, const PointSet& normals, const Vec3& camera_center,
                      double theta_valid_rad);

/// Fraction of the target image covered by projected points: in-bounds,
/// in front of the camera, and backed by valid source depth. Normalized by
/// width*height regardless of the point count. `source_valid` may be empty
/// (all points treated as depth-valid).
double image_coverage(const PointSet& points, std::span<const uint8_t> source_valid,
                      const Pose& w2c, const CameraIntrinsics& intrinsics, int width, int height);

/// Central-difference normals of a 3D point grid, unit length, oriented
/// toward the source camera center. Pixels without enough valid neighbors
/// are masked.
PointGrid estimate_normals(const PointGrid& points, const Vec3& source_camera_center);

/// Scene geometry of one patch, split by what each score consumes: ImgCov
/// runs over every depth-valid point, FrontCov over the subset with normals.
struct ScenePoints {
  PointSet points;       // all depth-valid points
  PointSet surf_points;  // subset with a valid normal estimate
  PointSet normals;      // aligned with surf_points
};

struct ViewValidity {
  double front_cov = 0.0;
  double img_cov = 0.0;
  bool accepted = false;
};

struct PoseSelectionConfig {
  double theta_valid_deg = 100.0;
  double frontcov_floor = 0.6;
  double imgcov_floor = 0.5;
};

struct SelectedPose {
  Pose pose;
  ViewValidity validity;
  int candidate_index = -1;
};

/// Scores every candidate (combined score = front_cov * img_cov), discards
/// those below the floors, and returns the argmax; ties break on the lower
/// candidate index. nullopt when every candidate fails a floor.
std::optional<SelectedPose> select_valid_pose(std::span<const Pose> candidates,
                                              const ScenePoints& scene,
                                              const CameraIntrinsics& intrinsics, int width,
                                              int height, const PoseSelectionConfig& cfg);

}  // namespace puzzlegen
