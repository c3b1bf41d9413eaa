// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "puzzlegen/types.hpp"

namespace puzzlegen {

/// Colored point cloud in planar layout; colors interleaved RGB, 3 bytes per
/// point.
struct PointCloud {
  std::vector<double> xs, ys, zs;
  std::vector<uint8_t> colors;

  size_t size() const { return xs.size(); }
  void reserve(size_t n) {
    xs.reserve(n);
    ys.reserve(n);
    zs.reserve(n);
    colors.reserve(3 * n);
  }
  void push_back(const Vec3& p, uint8_t r, uint8_t g, uint8_t b) {
    xs.push_back(p.x());
    ys.push_back(p.y());
    zs.push_back(p.z());
    colors.push_back(r);
    colors.push_back(g);
    colors.push_back(b);
  }
};

struct SplatConfig {
  int splat_px = 1;    // odd square footprint per point
  bool dilate = true;  // 3x3 pinhole-closing pass
};

struct RenderResult {
  Image8 rgb;                      // holes filled white (255,255,255)
  DepthMap depth;                  // 0 where hole
  std::vector<uint8_t> hole_mask;  // 1 = no point landed
  double hole_fraction = 1.0;
};

/// Deterministic z-buffer point-splat rasterizer. Nearest depth wins; ties
/// keep the earlier input index.
RenderResult render_pointcloud(const PointCloud& cloud, const Pose& w2c,
                               const CameraIntrinsics& intrinsics, int width, int height,
                               const SplatConfig& cfg = {});

/// Accept/discard by revealed-hole budget: discard iff hole_fraction > h_max
/// (strictly). Returns true to accept.
bool gate_by_holes(const RenderResult& result, double hole_max_frac);

}  // namespace puzzlegen
