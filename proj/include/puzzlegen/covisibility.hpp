// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "puzzlegen/types.hpp"

namespace puzzlegen {

/// Posed depth view prepared for overlap scoring: world-frame points and the
/// per-frame median depth are precomputed once.
struct ViewFrame {
  DepthMap depth;
  CameraIntrinsics intrinsics;
  Pose w2c;
  PointGrid world_points;
  double median_depth = 0.0;

  static ViewFrame build(DepthMap depth, const CameraIntrinsics& intrinsics, const Pose& w2c);
};

struct CovisConfig {
  double depth_tol_rel = 0.05;  // fraction of the reference frame's median depth
  double depth_tol_abs = 0.0;   // overrides the relative rule when > 0
  int stride = 2;               // source-pixel subsampling

  double tolerance_for(const ViewFrame& reference) const {
    return depth_tol_abs > 0.0 ? depth_tol_abs : depth_tol_rel * reference.median_depth;
  }
};

/// Fraction of the source frame's valid pixels whose 3D points land on
/// depth-consistent pixels of the reference view. nullopt when the source has
/// no valid pixel at the configured stride.
std::optional<double> overlap_score(const ViewFrame& source, const ViewFrame& reference,
                                    const CovisConfig& cfg);

struct OverlapMatrix {
  int n = 0;
  std::vector<double> values;
  std::vector<std::string> warnings;

  OverlapMatrix() = default;
  explicit OverlapMatrix(int count) : n(count), values(static_cast<size_t>(count) * count, 0.0) {}
  double at(int i, int j) const { return values[static_cast<size_t>(i) * n + j]; }
  double& at(int i, int j) { return values[static_cast<size_t>(i) * n + j]; }
};

/// All ordered pairs, diagonal included (computed, not assumed). Undefined
/// pair scores become 0 with a warning record.
OverlapMatrix overlap_matrix(std::span<const ViewFrame> frames, const CovisConfig& cfg);

std::string overlap_matrix_to_csv(const OverlapMatrix& m);
OverlapMatrix overlap_matrix_from_csv(const std::string& text);

}  // namespace puzzlegen
