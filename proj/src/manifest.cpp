// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0

#include "puzzlegen/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "puzzlegen/geometry.hpp"
#include "puzzlegen/image_io.hpp"

namespace puzzlegen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json intrinsics_to_json(const CameraIntrinsics& k) {
  return json{{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}};
}

CameraIntrinsics intrinsics_from_json(const json& j) {
  CameraIntrinsics k;
  k.fx = j.at("fx").get<double>();
  k.fy = j.at("fy").get<double>();
  k.cx = j.at("cx").get<double>();
  k.cy = j.at("cy").get<double>();
  return k;
}

json mat4_to_json(const Mat4& m) {
  json a = json::array();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) a.push_back(m(r, c));
  return a;
}

Mat4 mat4_from_json(const json& j) {
  if (!j.is_array() || j.size() != 16) throw InputError("pose must be a 16-element row-major array");
  Mat4 m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = j[static_cast<size_t>(r) * 4 + c].get<double>();
  return m;
}

}  // namespace

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("manifest " + path + " is not valid JSON: " + e.what());
  }

  DatasetManifest m;
  m.path = path;
  m.base_dir = fs::path(path).parent_path().string();
  m.schema_version = j.value("schema_version", 0);
  if (m.schema_version != 1) {
    throw InputError("manifest " + path + ": unknown schema_version " +
                     std::to_string(m.schema_version) + " (expected 1)");
  }
  m.kind = j.value("kind", "frames");
  m.depth_scale = j.value("depth_scale", 1000.0);
  if (!(m.depth_scale > 0.0)) throw InputError("manifest " + path + ": depth_scale must be > 0");

  if (!j.contains("frames") || !j["frames"].is_array()) {
    throw InputError("manifest " + path + ": missing frames array");
  }
  for (const auto& fj : j["frames"]) {
    FrameRecord rec;
    rec.id = fj.value("id", std::string("frame") + std::to_string(m.frames.size()));
    try {
      rec.rgb_path = fj.at("rgb").get<std::string>();
      rec.depth_path = fj.at("depth").get<std::string>();
      rec.intrinsics = intrinsics_from_json(fj.at("intrinsics"));
    } catch (const json::exception& e) {
      throw InputError("manifest " + path + ", record '" + rec.id + "': " + e.what());
    }
    if (!rec.intrinsics.valid()) {
      throw InputError("manifest " + path + ", record '" + rec.id + "': invalid intrinsics");
    }
    if (fj.contains("pose_c2w")) rec.pose_c2w = mat4_from_json(fj["pose_c2w"]);
    m.frames.push_back(std::move(rec));
  }
  return m;
}

SourceFrame load_frame(const DatasetManifest& manifest, const FrameRecord& record) {
  const fs::path base(manifest.base_dir);
  const std::string rgb_path = (base / record.rgb_path).string();
  const std::string depth_path = (base / record.depth_path).string();
  if (!fs::exists(rgb_path)) {
    throw InputError("record '" + record.id + "': missing rgb file " + rgb_path);
  }
  if (!fs::exists(depth_path)) {
    throw InputError("record '" + record.id + "': missing depth file " + depth_path);
  }

  SourceFrame frame;
  frame.id = record.id;
  frame.rgb = read_png_rgb8(rgb_path);
  int dw = 0, dh = 0;
  const std::vector<uint16_t> raw = read_png_gray16(depth_path, dw, dh);
  if (dw != frame.rgb.width || dh != frame.rgb.height) {
    throw InputError("record '" + record.id + "': rgb is " + std::to_string(frame.rgb.width) +
                     "x" + std::to_string(frame.rgb.height) + " but depth is " +
                     std::to_string(dw) + "x" + std::to_string(dh));
  }
  frame.depth = DepthMap(dw, dh);
  const double inv_scale = 1.0 / manifest.depth_scale;
  for (size_t i = 0; i < raw.size(); ++i) frame.depth.values[i] = raw[i] * inv_scale;
  frame.intrinsics = record.intrinsics;
  frame.pose_c2w = record.pose_c2w;
  return frame;
}

std::vector<SourceFrame> load_all_frames(const DatasetManifest& manifest) {
  std::vector<SourceFrame> frames;
  frames.reserve(manifest.frames.size());
  for (const auto& rec : manifest.frames) frames.push_back(load_frame(manifest, rec));
  return frames;
}

std::string write_clip_bundle(const ClipBundle& bundle, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  json j;
  j["schema_version"] = 1;
  j["kind"] = "clip_bundle";
  j["depth_scale"] = 1000.0;
  j["pixel_center"] = "integer";
  j["pose_convention"] = "camera_to_world";
  j["world_frame"] = bundle.world_frame;
  j["width"] = bundle.width;
  j["height"] = bundle.height;
  j["provenance"] = {{"source_id", bundle.provenance.source_id},
                     {"source_manifest", bundle.provenance.source_manifest},
                     {"seed", bundle.provenance.seed},
                     {"config_hash", bundle.provenance.config_hash}};
  j["warnings"] = bundle.warnings;

  json frames = json::array();
  char name[64];
  for (size_t i = 0; i < bundle.frames.size(); ++i) {
    const ClipFrame& f = bundle.frames[i];
    std::snprintf(name, sizeof(name), "frame_%03zu", i);
    const std::string rgb_name = std::string(name) + "_rgb.png";
    const std::string depth_name = std::string(name) + "_depth.png";
    const std::string mask_name = std::string(name) + "_holes.png";

    write_png_rgb8((dir / rgb_name).string(), f.rgb);
    std::vector<uint16_t> mm(f.depth.size());
    for (size_t p = 0; p < mm.size(); ++p) {
      const double v = std::lround(f.depth.values[p] * 1000.0);
      mm[p] = static_cast<uint16_t>(std::clamp(v, 0.0, 65535.0));
    }
    write_png_gray16((dir / depth_name).string(), f.depth.width, f.depth.height, mm.data());
    write_png_mask((dir / mask_name).string(), f.depth.width, f.depth.height, f.hole_mask.data());

    const Mat4 c2w = pose_to_matrix(invert_pose(f.w2c));
    json fj = {{"index", i},
               {"rgb", rgb_name},
               {"depth", depth_name},
               {"hole_mask", mask_name},
               {"intrinsics", intrinsics_to_json(f.intrinsics)},
               {"pose_c2w", mat4_to_json(c2w)},
               {"strategy", f.strategy},
               {"rotated", f.rotated},
               {"patch", {f.patch.u1, f.patch.v1, f.patch.u2, f.patch.v2}},
               {"hole_fraction", f.hole_fraction}};
    if (f.front_cov >= 0.0) fj["front_cov"] = f.front_cov;
    if (f.img_cov >= 0.0) fj["img_cov"] = f.img_cov;
    if (f.pnp_rmse_px >= 0.0) fj["pnp_rmse_px"] = f.pnp_rmse_px;
    frames.push_back(std::move(fj));
  }
  j["frames"] = std::move(frames);

  const std::string manifest_path = (dir / "bundle.json").string();
  std::ofstream out(manifest_path);
  if (!out) throw IoError("cannot write " + manifest_path);
  out << j.dump(2) << "\n";
  return manifest_path;
}

ClipBundle load_clip_bundle(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open bundle manifest: " + manifest_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("bundle manifest " + manifest_path + " is not valid JSON: " + e.what());
  }
  if (j.value("schema_version", 0) != 1 || j.value("kind", "") != "clip_bundle") {
    throw InputError("bundle manifest " + manifest_path + ": not a schema v1 clip_bundle");
  }

  const fs::path dir = fs::path(manifest_path).parent_path();
  ClipBundle b;
  b.width = j.at("width").get<int>();
  b.height = j.at("height").get<int>();
  b.world_frame = j.value("world_frame", "source_camera");
  const auto& pj = j.at("provenance");
  b.provenance.source_id = pj.value("source_id", "");
  b.provenance.source_manifest = pj.value("source_manifest", "");
  b.provenance.seed = pj.value("seed", 0ULL);
  b.provenance.config_hash = pj.value("config_hash", "");
  for (const auto& wj : j.value("warnings", json::array())) b.warnings.push_back(wj.get<std::string>());

  const double depth_scale = j.value("depth_scale", 1000.0);
  for (const auto& fj : j.at("frames")) {
    ClipFrame f;
    f.rgb = read_png_rgb8((dir / fj.at("rgb").get<std::string>()).string());
    int dw = 0, dh = 0;
    const auto raw = read_png_gray16((dir / fj.at("depth").get<std::string>()).string(), dw, dh);
    f.depth = DepthMap(dw, dh);
    for (size_t p = 0; p < raw.size(); ++p) f.depth.values[p] = raw[p] / depth_scale;
    int mw = 0, mh = 0;
    f.hole_mask = read_png_mask((dir / fj.at("hole_mask").get<std::string>()).string(), mw, mh);
    if (dw != b.width || dh != b.height || mw != dw || mh != dh || f.rgb.width != dw ||
        f.rgb.height != dh) {
      throw InputError("bundle frame " + std::to_string(b.frames.size()) +
                       ": channel dimensions disagree");
    }
    f.intrinsics = intrinsics_from_json(fj.at("intrinsics"));
    f.w2c = invert_pose(pose_from_matrix(mat4_from_json(fj.at("pose_c2w"))));
    f.strategy = fj.value("strategy", "");
    f.rotated = fj.value("rotated", false);
    const auto& patch = fj.at("patch");
    f.patch = {patch[0].get<int>(), patch[1].get<int>(), patch[2].get<int>(), patch[3].get<int>()};
    f.hole_fraction = fj.value("hole_fraction", 0.0);
    f.front_cov = fj.value("front_cov", -1.0);
    f.img_cov = fj.value("img_cov", -1.0);
    f.pnp_rmse_px = fj.value("pnp_rmse_px", -1.0);
    b.frames.push_back(std::move(f));
  }
  return b;
}

std::string write_frame_manifest(const std::vector<SourceFrame>& frames,
                                 const std::string& out_dir, const std::string& kind) {
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  json j;
  j["schema_version"] = 1;
  j["kind"] = kind;
  j["depth_scale"] = 1000.0;
  j["pixel_center"] = "integer";
  j["pose_convention"] = "camera_to_world";
  json fl = json::array();
  for (const auto& f : frames) {
    const std::string rgb_name = f.id + "_rgb.png";
    const std::string depth_name = f.id + "_depth.png";
    write_png_rgb8((dir / rgb_name).string(), f.rgb);
    std::vector<uint16_t> mm(f.depth.size());
    for (size_t p = 0; p < mm.size(); ++p) {
      mm[p] = static_cast<uint16_t>(std::clamp(std::lround(f.depth.values[p] * 1000.0), 0L, 65535L));
    }
    write_png_gray16((dir / depth_name).string(), f.depth.width, f.depth.height, mm.data());
    json fj = {{"id", f.id},
               {"rgb", rgb_name},
               {"depth", depth_name},
               {"intrinsics", intrinsics_to_json(f.intrinsics)}};
    if (f.pose_c2w) fj["pose_c2w"] = mat4_to_json(*f.pose_c2w);
    fl.push_back(std::move(fj));
  }
  j["frames"] = std::move(fl);
  const std::string manifest_path = (dir / "frames.json").string();
  std::ofstream out(manifest_path);
  if (!out) throw IoError("cannot write " + manifest_path);
  out << j.dump(2) << "\n";
  return manifest_path;
}

}  // namespace puzzlegen
