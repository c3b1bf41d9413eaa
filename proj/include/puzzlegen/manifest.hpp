// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "puzzlegen/pipeline.hpp"
#include "puzzlegen/types.hpp"

namespace puzzlegen {

/// One dataset entry: image paths relative to the manifest, intrinsics, and
/// an optional camera-to-world pose.
struct FrameRecord {
  std::string id;
  std::string rgb_path;
  std::string depth_path;
  CameraIntrinsics intrinsics;
  std::optional<Mat4> pose_c2w;
};

struct DatasetManifest {
  int schema_version = 1;
  std::string kind;          // "frames" | "clip" | "clip_bundle"
  double depth_scale = 1000.0;  // raw units per meter
  std::vector<FrameRecord> frames;
  std::string base_dir;  // directory of the manifest file
  std::string path;
};

DatasetManifest load_manifest(const std::string& path);

/// Decodes one record: depth raw/scale -> meters. Errors name the record.
SourceFrame load_frame(const DatasetManifest& manifest, const FrameRecord& record);
std::vector<SourceFrame> load_all_frames(const DatasetManifest& manifest);

/// Writes per-frame PNGs (8-bit RGB, 16-bit millimeter depth, 1-bit hole
/// mask) plus bundle.json into `out_dir`. Returns the manifest path.
std::string write_clip_bundle(const ClipBundle& bundle, const std::string& out_dir);

ClipBundle load_clip_bundle(const std::string& manifest_path);

/// Helper for tests and tools: persists frames as a loadable dataset.
std::string write_frame_manifest(const std::vector<SourceFrame>& frames,
                                 const std::string& out_dir, const std::string& kind = "frames");

}  // namespace puzzlegen
