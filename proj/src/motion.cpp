// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0

#include "puzzlegen/motion.hpp"

#include <algorithm>
#include <cmath>

#include "puzzlegen/geometry.hpp"
#include "puzzlegen/kernels.hpp"

namespace puzzlegen {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

AxisAngle sample_rotation(const RotationSampler& sampler, Rng& rng) {
  if (!sampler.valid()) throw std::invalid_argument("rotation sampler: need 0 <= min <= max <= 180");
  AxisAngle out;
  out.axis = rng.unit_vector();
  double deg = rng.uniform(sampler.theta_min_deg, sampler.theta_max_deg);
  if (sampler.sigma_deg > 0.0) deg += rng.normal(0.0, sampler.sigma_deg);
  deg = std::clamp(deg, 0.0, 180.0);
  out.angle_rad = deg * kDegToRad;
  return out;
}

double front_coverage(const PointSet& points, const PointSet& normals, const Vec3& camera_center,
                      double theta_valid_rad) {
  if (points.size() == 0) throw std::invalid_argument("front_coverage: empty point set");
  if (points.size() != normals.size()) {
    throw std::invalid_argument("front_coverage: points/normals size mismatch");
  }
  const double center[3] = {camera_center.x(), camera_center.y(), camera_center.z()};
  const size_t hits = kernels::active().count_front_facing(
      points.xs.data(), points.ys.data(), points.zs.data(), normals.xs.data(), normals.ys.data(),
      normals.zs.data(), points.size(), center, std::cos(theta_valid_rad));
  return static_cast<double>(hits) / static_cast<double>(points.size());
}

double image_coverage(const PointSet& points, std::span<const uint8_t> source_valid,
                      const Pose& w2c, const CameraIntrinsics& intrinsics, int width, int height) {
  intrinsics.require_valid();
  const size_t n = points.size();
  if (n == 0) return 0.0;

  std::vector<double> cx(n), cy(n), cz(n), us(n), vs(n);
  double rot[9], trans[3] = {w2c.translation.x(), w2c.translation.y(), w2c.translation.z()};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) rot[r * 3 + c] = w2c.rotation(r, c);
  const auto& k = kernels::active();
  k.transform_points(rot, trans, points.xs.data(), points.ys.data(), points.zs.data(), n,
                     cx.data(), cy.data(), cz.data());
  k.project_points(intrinsics.fx, intrinsics.fy, intrinsics.cx, intrinsics.cy, cx.data(),
                   cy.data(), cz.data(), n, us.data(), vs.data());

  size_t hits = 0;
  for (size_t i = 0; i < n; ++i) {
    if (!source_valid.empty() && !source_valid[i]) continue;
    if (!(cz[i] > kDepthEpsilon)) continue;
    if (us[i] >= 0.0 && us[i] < width && vs[i] >= 0.0 && vs[i] < height) ++hits;
  }
  return static_cast<double>(hits) / (static_cast<double>(width) * height);
}

PointGrid estimate_normals(const PointGrid& points, const Vec3& source_camera_center) {
  const int w = points.width, h = points.height;
  PointGrid normals(w, h);

  auto valid_at = [&](int x, int y) { return points.valid[points.index(x, y)] != 0; };

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!valid_at(x, y)) continue;
      // Central differences, falling back to one-sided at borders and next
      // to invalid pixels.
      int xl = x - 1, xr = x + 1;
      if (xl < 0 || !valid_at(xl, y)) xl = x;
      if (xr >= w || !valid_at(xr, y)) xr = x;
      int yu = y - 1, yd = y + 1;
      if (yu < 0 || !valid_at(x, yu)) yu = y;
      if (yd >= h || !valid_at(x, yd)) yd = y;
      if (xl == xr || yu == yd) continue;  // isolated pixel, no tangent

      const Vec3 du = points.point(xr, y) - points.point(xl, y);
      const Vec3 dv = points.point(x, yd) - points.point(x, yu);
      Vec3 n = du.cross(dv);
      const double len = n.norm();
      if (len < 1e-12) continue;
      n /= len;
      if (n.dot(source_camera_center - points.point(x, y)) < 0.0) n = -n;
      normals.set_point(x, y, n, true);
    }
  }
  return normals;
}

std::optional<SelectedPose> select_valid_pose(std::span<const Pose> candidates,
                                              const ScenePoints& scene,
                                              const CameraIntrinsics& intrinsics, int width,
                                              int height, const PoseSelectionConfig& cfg) {
  if (candidates.empty()) throw std::invalid_argument("select_valid_pose: no candidates");
  const double theta_valid = cfg.theta_valid_deg * kDegToRad;

  std::optional<SelectedPose> best;
  double best_score = -1.0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const Pose& pose = candidates[i];
    ViewValidity v;
    v.front_cov = scene.surf_points.size() == 0
                      ? 0.0
                      : front_coverage(scene.surf_points, scene.normals, camera_center(pose),
                                       theta_valid);
    v.img_cov = image_coverage(scene.points, {}, pose, intrinsics, width, height);
    v.accepted = v.front_cov >= cfg.frontcov_floor && v.img_cov >= cfg.imgcov_floor;
    if (!v.accepted) continue;
    const double score = v.front_cov * v.img_cov;
    if (score > best_score) {
      best_score = score;
      best = SelectedPose{pose, v, static_cast<int>(i)};
    }
  }
  return best;
}

}  // namespace puzzlegen
