// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "puzzlegen/rng.hpp"
#include "puzzlegen/types.hpp"

namespace puzzlegen {

double bbox_iou(const PatchBox& a, const PatchBox& b);

/// Target IoU between consecutive patches, decaying linearly from iou_start
/// to iou_end over the clip with a symmetric acceptance band.
struct OverlapSchedule {
  double iou_start = 0.7;
  double iou_end = 0.3;
  double band_halfwidth = 0.1;

  struct Band {
    double lo = 0.0;
    double hi = 1.0;
  };
  /// Band for the transition into patch `step` (1-based; step 0 has no band).
  Band band(int step, int count) const;
  bool valid() const {
    return iou_start > 0.0 && iou_end > 0.0 && iou_start <= 1.0 && iou_start >= iou_end &&
           band_halfwidth >= 0.0;
  }
};

struct PatchSamplerConfig {
  int count = 8;
  double size_min_frac = 0.3;
  double size_max_frac = 0.8;
  OverlapSchedule schedule;
  int out_width = 512;
  int out_height = 384;
  int retry_budget = 64;
};

/// Draws ordered, overlapping patches whose aspect ratio matches the output
/// resolution. Sampling is incremental so callers can redraw a single step
/// when downstream calibration rejects a patch.
class PatchSampler {
 public:
  /// Throws ConfigError when the frame cannot hold the configured sizes.
  PatchSampler(int frame_width, int frame_height, const PatchSamplerConfig& cfg);

  PatchBox first(Rng& rng) const;
  /// Next patch whose IoU with `prev` falls in the schedule band for `step`.
  /// Throws SamplingError once the retry budget is exhausted.
  PatchBox next(const PatchBox& prev, int step, Rng& rng) const;

  const PatchSamplerConfig& config() const { return cfg_; }

 private:
  PatchBox sample_box_of_base(double base, Rng& rng) const;
  PatchBox place_box(double base, double center_u, double center_v) const;
  double sample_base(Rng& rng) const;

  int frame_w_ = 0;
  int frame_h_ = 0;
  PatchSamplerConfig cfg_;
  double aspect_ = 1.0;  // out_width / out_height
};

/// Convenience wrapper producing the whole ordered sequence at once.
std::vector<PatchBox> sample_patch_sequence(int frame_width, int frame_height,
                                            const PatchSamplerConfig& cfg, uint64_t seed);

}  // namespace puzzlegen
