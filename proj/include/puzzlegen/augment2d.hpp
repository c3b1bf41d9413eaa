// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "puzzlegen/rng.hpp"
#include "puzzlegen/types.hpp"

namespace puzzlegen {

struct Aug2dConfig {
  bool enabled = false;
  double rot_deg = 45.0;
  double trans_frac = 0.2;
  double scale_min = 0.8;
  double scale_max = 1.0;
  double persp_scale = 0.1;
  double persp_prob = 0.1;
};

/// Channels warped jointly: RGB resamples bilinearly, depth / pointmap / mask
/// by nearest neighbor, all through the same 2D map. Camera parameters are
/// deliberately not touched. `points` may be empty (width == 0); `mask` uses
/// 1 = valid.
struct ChannelBundle {
  Image8 rgb;
  DepthMap depth;
  std::vector<uint8_t> mask;
  PointGrid points;
};

/// Forward homography (source pixel -> output pixel). `is_identity` marks an
/// exact no-op so identity-parameter draws skip resampling entirely.
struct Warp2d {
  Mat3 forward = Mat3::Identity();
  bool is_identity = true;
};

Warp2d sample_affine_warp(const Aug2dConfig& cfg, int width, int height, Rng& rng);
Warp2d sample_perspective_warp(const Aug2dConfig& cfg, int width, int height, Rng& rng);

ChannelBundle apply_warp(const ChannelBundle& in, const Warp2d& warp);

/// Center-anchored rotation/scale plus translation, parameters per the
/// configured ranges. Deterministic per seed.
ChannelBundle random_affine(const ChannelBundle& in, const Aug2dConfig& cfg, uint64_t seed);

/// Four-corner perspective jitter, applied with probability persp_prob.
ChannelBundle random_perspective(const ChannelBundle& in, const Aug2dConfig& cfg, uint64_t seed);

}  // namespace puzzlegen
