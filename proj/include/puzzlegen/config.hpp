// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "puzzlegen/augment2d.hpp"
#include "puzzlegen/calibration.hpp"
#include "puzzlegen/covisibility.hpp"
#include "puzzlegen/keyframes.hpp"
#include "puzzlegen/motion.hpp"
#include "puzzlegen/patch.hpp"
#include "puzzlegen/render.hpp"

namespace puzzlegen {

/// Every tunable of the synthesis pipeline with its default. Keys are the
/// dotted names documented in docs/FORMATS.md; anything else is rejected.
struct PipelineConfig {
  PatchSamplerConfig patch;  // patch.* (count doubles as the clip length M)

  struct Calib {
    double extrinsic_prob = 0.8;  // P(fixed intrinsics + recovered extrinsics)
    RansacConfig ransac;
    int max_correspondences = 2000;
    double rmse_ceiling_px = 8.0;  // discard patches whose PnP fit is worse
    int patch_retries = 8;         // patch redraws before shortening the clip
  } calib;

  RotationSampler rot;        // rot.theta_*, rot.sigma
  int rot_candidates = 16;    // 0 disables motion augmentation
  PoseSelectionConfig select; // rot.theta_valid, floors

  SplatConfig render;
  double hole_max_frac = 0.3;

  CovisConfig covis;
  KeyframeThresholds keyframe;
  Aug2dConfig aug2d;
};

/// Applies `key=value`; throws ConfigError on unknown keys or unparsable
/// values.
void apply_key_value(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Key-value config file: one `key=value` per line, '#' comments, blank lines
/// ignored.
PipelineConfig load_config_file(const std::string& path, PipelineConfig base = {});

/// Canonical serialization (sorted keys) used for hashing and provenance.
std::string canonical_config(const PipelineConfig& cfg);

/// FNV-1a 64 over the canonical serialization, hex-encoded.
std::string config_hash(const PipelineConfig& cfg);

}  // namespace puzzlegen
