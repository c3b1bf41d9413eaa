// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0

#include "puzzlegen/patch.hpp"

#include <algorithm>
#include <cmath>

namespace puzzlegen {

double bbox_iou(const PatchBox& a, const PatchBox& b) {
  const int iw = std::min(a.u2, b.u2) - std::max(a.u1, b.u1);
  const int ih = std::min(a.v2, b.v2) - std::max(a.v1, b.v1);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = static_cast<double>(iw) * ih;
  const double uni = static_cast<double>(a.area()) + static_cast<double>(b.area()) - inter;
  return inter / uni;
}

OverlapSchedule::Band OverlapSchedule::band(int step, int count) const {
  // Transitions are indexed 1..count-1; the target decays linearly from
  // iou_start on the first transition to iou_end on the last.
  double f = 0.0;
  if (count > 2) f = static_cast<double>(step - 1) / static_cast<double>(count - 2);
  const double target = iou_start + (iou_end - iou_start) * f;
  Band b;
  b.lo = std::max(0.01, target - band_halfwidth);
  b.hi = std::min(1.0, target + band_halfwidth);
  if (b.lo > b.hi) b.lo = b.hi;
  return b;
}

namespace {

struct BoxDims {
  int w = 0;
  int h = 0;
};

BoxDims dims_for_base(double base, double aspect) {
  BoxDims d;
  if (aspect >= 1.0) {
    d.h = std::max(1, static_cast<int>(std::lround(base)));
    d.w = std::max(1, static_cast<int>(std::lround(d.h * aspect)));
  } else {
    d.w = std::max(1, static_cast<int>(std::lround(base)));
    d.h = std::max(1, static_cast<int>(std::lround(d.w / aspect)));
  }
  return d;
}

// Continuous-coordinate IoU used by the placement search.
double iou_continuous(const PatchBox& a, double bu1, double bv1, double bw, double bh) {
  const double iw = std::min<double>(a.u2, bu1 + bw) - std::max<double>(a.u1, bu1);
  const double ih = std::min<double>(a.v2, bv1 + bh) - std::max<double>(a.v1, bv1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = static_cast<double>(a.area()) + bw * bh - inter;
  return inter / uni;
}

}  // namespace

PatchSampler::PatchSampler(int frame_width, int frame_height, const PatchSamplerConfig& cfg)
    : frame_w_(frame_width), frame_h_(frame_height), cfg_(cfg) {
  if (cfg_.count < 1) throw ConfigError("patch.count must be >= 1");
  if (cfg_.out_width < 1 || cfg_.out_height < 1) throw ConfigError("patch output size must be >= 1");
  if (!(cfg_.size_min_frac > 0.0 && cfg_.size_min_frac <= cfg_.size_max_frac &&
        cfg_.size_max_frac <= 1.0)) {
    throw ConfigError("patch size fractions must satisfy 0 < min <= max <= 1");
  }
  if (!cfg_.schedule.valid()) throw ConfigError("patch IoU schedule must satisfy 1 >= start >= end > 0");
  aspect_ = static_cast<double>(cfg_.out_width) / static_cast<double>(cfg_.out_height);
  const double side = static_cast<double>(std::min(frame_w_, frame_h_));
  const BoxDims largest = dims_for_base(cfg_.size_max_frac * side, aspect_);
  const BoxDims smallest = dims_for_base(cfg_.size_min_frac * side, aspect_);
  if (largest.w > frame_w_ || largest.h > frame_h_) {
    throw ConfigError("frame too small for patch.size_max_frac at the configured aspect ratio");
  }
  if (smallest.w < 2 || smallest.h < 2) {
    throw ConfigError("frame too small for patch.size_min_frac (patch collapses below 2 px)");
  }
}

double PatchSampler::sample_base(Rng& rng) const {
  const double side = static_cast<double>(std::min(frame_w_, frame_h_));
  return rng.uniform(cfg_.size_min_frac, cfg_.size_max_frac) * side;
}

PatchBox PatchSampler::place_box(double base, double center_u, double center_v) const {
  const BoxDims d = dims_for_base(base, aspect_);
  int u1 = static_cast<int>(std::lround(center_u - d.w * 0.5));
  int v1 = static_cast<int>(std::lround(center_v - d.h * 0.5));
  u1 = std::clamp(u1, 0, frame_w_ - d.w);
  v1 = std::clamp(v1, 0, frame_h_ - d.h);
  return {u1, v1, u1 + d.w, v1 + d.h};
}

PatchBox PatchSampler::first(Rng& rng) const {
  const BoxDims d = dims_for_base(sample_base(rng), aspect_);
  const int u1 = rng.uniform_int(frame_w_ - d.w + 1);
  const int v1 = rng.uniform_int(frame_h_ - d.h + 1);
  return {u1, v1, u1 + d.w, v1 + d.h};
}

PatchBox PatchSampler::next(const PatchBox& prev, int step, Rng& rng) const {
  const OverlapSchedule::Band band = cfg_.schedule.band(step, cfg_.count);
  const double target = 0.5 * (band.lo + band.hi);
  const double pcu = 0.5 * (prev.u1 + prev.u2);
  const double pcv = 0.5 * (prev.v1 + prev.v2);

  for (int attempt = 0; attempt < cfg_.retry_budget; ++attempt) {
    const double base = sample_base(rng);
    const BoxDims d = dims_for_base(base, aspect_);
    const double bw = d.w, bh = d.h;
    // Concentric placement maximizes IoU for this size; skip sizes that can
    // never reach the band floor.
    const double iou_max =
        iou_continuous(prev, pcu - bw * 0.5, pcv - bh * 0.5, bw, bh);
    if (iou_max < band.lo) continue;

    double r_lo = 0.0, r_hi = 0.0;
    double iou_lo = iou_max;
    PatchBox candidate;
    if (iou_max <= band.hi) {
      // Concentric already inside the band.
      candidate = place_box(base, pcu, pcv);
    } else {
      const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double du = std::cos(phi), dv = std::sin(phi);
      // Grow the offset until the IoU drops below target, then bisect.
      r_hi = 1.0;
      const double r_max = std::hypot(frame_w_, frame_h_);
      while (r_hi < r_max &&
             iou_continuous(prev, pcu + du * r_hi - bw * 0.5, pcv + dv * r_hi - bh * 0.5, bw, bh) >
                 target) {
        r_lo = r_hi;
        r_hi *= 2.0;
      }
      for (int it = 0; it < 48; ++it) {
        const double mid = 0.5 * (r_lo + r_hi);
        const double iou =
            iou_continuous(prev, pcu + du * mid - bw * 0.5, pcv + dv * mid - bh * 0.5, bw, bh);
        if (iou > target) {
          r_lo = mid;
          iou_lo = iou;
        } else {
          r_hi = mid;
        }
      }
      (void)iou_lo;
      candidate = place_box(base, pcu + du * r_lo, pcv + dv * r_lo);
    }
    const double actual = bbox_iou(prev, candidate);
    if (actual >= band.lo && actual <= band.hi) return candidate;
  }
  throw SamplingError("patch sampling failed to hit the IoU band after " +
                      std::to_string(cfg_.retry_budget) + " proposals (step " +
                      std::to_string(step) + ")");
}

std::vector<PatchBox> sample_patch_sequence(int frame_width, int frame_height,
                                            const PatchSamplerConfig& cfg, uint64_t seed) {
  PatchSampler sampler(frame_width, frame_height, cfg);
  Rng rng(seed);
  std::vector<PatchBox> boxes;
  boxes.reserve(cfg.count);
  boxes.push_back(sampler.first(rng));
  for (int m = 1; m < cfg.count; ++m) boxes.push_back(sampler.next(boxes.back(), m, rng));
  return boxes;
}

}  // namespace puzzlegen
