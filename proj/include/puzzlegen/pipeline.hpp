// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "puzzlegen/config.hpp"
#include "puzzlegen/types.hpp"

namespace puzzlegen {

/// One RGB-D input view. When `pose_c2w` is absent the camera frame itself is
/// the world frame for everything derived from this view.
struct SourceFrame {
  std::string id;
  Image8 rgb;
  DepthMap depth;
  CameraIntrinsics intrinsics;
  std::optional<Mat4> pose_c2w;

  Pose w2c() const;
};

struct ClipFrame {
  Image8 rgb;
  DepthMap depth;                  // meters, 0 in holes
  std::vector<uint8_t> hole_mask;  // 1 = hole / invalid
  CameraIntrinsics intrinsics;
  Pose w2c;
  std::string strategy;  // "rescale" | "pnp"
  bool rotated = false;
  PatchBox patch;
  double front_cov = -1.0;  // validity scores for rotated frames, else -1
  double img_cov = -1.0;
  double hole_fraction = 0.0;
  double pnp_rmse_px = -1.0;
};

struct Provenance {
  std::string source_id;
  std::string source_manifest;  // optional; lets `validate` find the source
  uint64_t seed = 0;
  std::string config_hash;
};

struct ClipBundle {
  int width = 0;
  int height = 0;
  std::string world_frame;  // "source_camera" | "input_world"
  std::vector<ClipFrame> frames;
  Provenance provenance;
  std::vector<std::string> warnings;
};

/// Ordered, overlapping, posed video-depth clip from one RGB-D frame.
/// Deterministic per (input, config, seed).
ClipBundle image_to_clips(const SourceFrame& source, const PipelineConfig& cfg, uint64_t seed);

/// Covisibility-balanced sub-clips from a posed RGB-D clip: overlap matrix,
/// keyframe selection, then one Image-to-Clips bundle per keyframe (sub-seed
/// derived from the keyframe index). Falls back to uniform keyframes with a
/// warning when selection returns nothing.
std::vector<ClipBundle> clips_to_clips(std::span<const SourceFrame> clip,
                                       const PipelineConfig& cfg, uint64_t seed);

}  // namespace puzzlegen
