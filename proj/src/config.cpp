// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0

#include "puzzlegen/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace puzzlegen {

namespace {

struct KeyBinding {
  std::function<void(PipelineConfig&, const std::string&)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as a number");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as an integer");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as a bool");
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

#define BIND_DOUBLE(key, field)                                                       \
  {key,                                                                               \
   {[](PipelineConfig& c, const std::string& v) { c.field = parse_double(key, v); },  \
    [](const PipelineConfig& c) { return fmt_double(c.field); }}}
#define BIND_INT(key, field)                                                          \
  {key,                                                                               \
   {[](PipelineConfig& c, const std::string& v) { c.field = parse_int(key, v); },     \
    [](const PipelineConfig& c) { return std::to_string(c.field); }}}
#define BIND_BOOL(key, field)                                                         \
  {key,                                                                               \
   {[](PipelineConfig& c, const std::string& v) { c.field = parse_bool(key, v); },    \
    [](const PipelineConfig& c) { return c.field ? std::string("true") : std::string("false"); }}}

const std::map<std::string, KeyBinding>& bindings() {
  static const std::map<std::string, KeyBinding> map = {
      BIND_INT("patch.count", patch.count),
      BIND_DOUBLE("patch.size_min_frac", patch.size_min_frac),
      BIND_DOUBLE("patch.size_max_frac", patch.size_max_frac),
      BIND_DOUBLE("patch.iou_start", patch.schedule.iou_start),
      BIND_DOUBLE("patch.iou_end", patch.schedule.iou_end),
      BIND_INT("patch.output_width", patch.out_width),
      BIND_INT("patch.output_height", patch.out_height),
      BIND_INT("patch.retry_budget", patch.retry_budget),
      BIND_DOUBLE("calib.extrinsic_prob", calib.extrinsic_prob),
      BIND_DOUBLE("calib.ransac_thresh_px", calib.ransac.thresh_px),
      BIND_INT("calib.ransac_max_iters", calib.ransac.max_iters),
      BIND_DOUBLE("calib.min_inlier_frac", calib.ransac.min_inlier_frac),
      BIND_INT("calib.max_correspondences", calib.max_correspondences),
      BIND_DOUBLE("calib.rmse_ceiling_px", calib.rmse_ceiling_px),
      BIND_INT("calib.patch_retries", calib.patch_retries),
      BIND_DOUBLE("rot.theta_min_deg", rot.theta_min_deg),
      BIND_DOUBLE("rot.theta_max_deg", rot.theta_max_deg),
      BIND_DOUBLE("rot.sigma_deg", rot.sigma_deg),
      BIND_DOUBLE("rot.theta_valid_deg", select.theta_valid_deg),
      BIND_INT("rot.candidates", rot_candidates),
      BIND_DOUBLE("rot.frontcov_floor", select.frontcov_floor),
      BIND_DOUBLE("rot.imgcov_floor", select.imgcov_floor),
      BIND_INT("render.splat_px", render.splat_px),
      BIND_BOOL("render.dilate", render.dilate),
      BIND_DOUBLE("render.hole_max_frac", hole_max_frac),
      BIND_DOUBLE("covis.depth_tol_rel", covis.depth_tol_rel),
      BIND_DOUBLE("covis.depth_tol_abs", covis.depth_tol_abs),
      BIND_INT("covis.stride", covis.stride),
      BIND_DOUBLE("keyframe.eta", keyframe.eta),
      BIND_DOUBLE("keyframe.tau", keyframe.tau),
      BIND_DOUBLE("keyframe.rho", keyframe.rho),
      BIND_BOOL("aug2d.enabled", aug2d.enabled),
      BIND_DOUBLE("aug2d.rot_deg", aug2d.rot_deg),
      BIND_DOUBLE("aug2d.trans_frac", aug2d.trans_frac),
      BIND_DOUBLE("aug2d.scale_min", aug2d.scale_min),
      BIND_DOUBLE("aug2d.scale_max", aug2d.scale_max),
      BIND_DOUBLE("aug2d.persp_scale", aug2d.persp_scale),
      BIND_DOUBLE("aug2d.persp_prob", aug2d.persp_prob),
  };
  return map;
}

#undef BIND_DOUBLE
#undef BIND_INT
#undef BIND_BOOL

}  // namespace

void apply_key_value(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = bindings().find(key);
  if (it == bindings().end()) throw ConfigError("unknown config key '" + key + "'");
  it->second.set(cfg, value);
}

PipelineConfig load_config_file(const std::string& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    auto strip = [](std::string s) {
      const auto sb = s.find_first_not_of(" \t");
      const auto se = s.find_last_not_of(" \t");
      return sb == std::string::npos ? std::string() : s.substr(sb, se - sb + 1);
    };
    apply_key_value(base, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
  }
  return base;
}

std::string canonical_config(const PipelineConfig& cfg) {
  std::ostringstream os;
  for (const auto& [key, binding] : bindings()) os << key << "=" << binding.get(cfg) << "\n";
  return os.str();
}

std::string config_hash(const PipelineConfig& cfg) {
  const std::string text = canonical_config(cfg);
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace puzzlegen
