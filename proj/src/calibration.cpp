// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0

#include "puzzlegen/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "puzzlegen/geometry.hpp"
#include "puzzlegen/rng.hpp"

namespace puzzlegen {

CameraIntrinsics rescale_intrinsics(const CameraIntrinsics& k_full, const PatchBox& patch,
                                    int out_w, int out_h) {
  k_full.require_valid();
  if (patch.width() <= 0 || patch.height() <= 0) {
    throw std::invalid_argument("rescale_intrinsics: zero-area patch");
  }
  if (out_w <= 0 || out_h <= 0) throw std::invalid_argument("rescale_intrinsics: bad output size");
  const double sx = static_cast<double>(out_w) / static_cast<double>(patch.width());
  const double sy = static_cast<double>(out_h) / static_cast<double>(patch.height());
  CameraIntrinsics k;
  k.fx = k_full.fx * sx;
  k.fy = k_full.fy * sy;
  k.cx = (k_full.cx - patch.u1) * sx;
  k.cy = (k_full.cy - patch.v1) * sy;
  return k;
}

CameraIntrinsics fixed_patch_intrinsics(int out_w, int out_h, double fx, double fy) {
  if (fx <= 0.0 || fy <= 0.0) throw std::invalid_argument("fixed_patch_intrinsics: focal must be > 0");
  return {fx, fy, out_w / 2.0, out_h / 2.0};
}

namespace detail {
namespace {

// Real roots of a polynomial (highest degree first) via the companion matrix
// of the deflated polynomial, each polished with a few Newton steps.
std::vector<double> real_roots(std::vector<double> coeffs) {
  const double scale = [&] {
    double m = 0.0;
    for (double c : coeffs) m = std::max(m, std::abs(c));
    return m;
  }();
  if (scale == 0.0) return {};
  size_t lead = 0;
  while (lead < coeffs.size() && std::abs(coeffs[lead]) < 1e-14 * scale) ++lead;
  coeffs.erase(coeffs.begin(), coeffs.begin() + lead);
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg < 1) return {};
  if (deg == 1) return {-coeffs[1] / coeffs[0]};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 0; i < deg; ++i) companion(0, i) = -coeffs[i + 1] / coeffs[0];
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion);

  auto eval = [&](double x, double& value, double& deriv) {
    value = coeffs[0];
    deriv = 0.0;
    for (size_t i = 1; i < coeffs.size(); ++i) {
      deriv = deriv * x + value;
      value = value * x + coeffs[i];
    }
  };

  std::vector<double> roots;
  for (int i = 0; i < deg; ++i) {
    const std::complex<double> r = es.eigenvalues()[i];
    if (std::abs(r.imag()) > 1e-7 * (1.0 + std::abs(r.real()))) continue;
    double x = r.real();
    for (int it = 0; it < 4; ++it) {
      double value, deriv;
      eval(x, value, deriv);
      if (std::abs(deriv) < 1e-30) break;
      x -= value / deriv;
    }
    roots.push_back(x);
  }
  return roots;
}

// Rigid alignment (Kabsch): finds R, t with cam_i ~= R * world_i + t.
Pose align_rigid(const std::array<Vec3, 3>& world, const std::array<Vec3, 3>& cam) {
  Vec3 wc = (world[0] + world[1] + world[2]) / 3.0;
  Vec3 cc = (cam[0] + cam[1] + cam[2]) / 3.0;
  Mat3 h = Mat3::Zero();
  for (int i = 0; i < 3; ++i) h += (world[i] - wc) * (cam[i] - cc).transpose();
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  Pose pose;
  pose.rotation = svd.matrixV() * d * svd.matrixU().transpose();
  pose.translation = cc - pose.rotation * wc;
  return pose;
}

}  // namespace

std::vector<Pose> solve_p3p(const std::array<Vec3, 3>& world,
                            const std::array<Vec3, 3>& bearings) {
  // Grunert's distance formulation: with s_i the range along bearing f_i,
  //   s1^2 + s2^2 - 2 s1 s2 K1 = c2   (c = |P1P2|)
  //   s1^2 + s3^2 - 2 s1 s3 K2 = b2   (b = |P1P3|)
  //   s2^2 + s3^2 - 2 s2 s3 K3 = a2   (a = |P2P3|)
  // substituting s2 = u s1, s3 = v s1 reduces to a quartic in v.
  const double k1 = bearings[0].dot(bearings[1]);
  const double k2 = bearings[0].dot(bearings[2]);
  const double k3 = bearings[1].dot(bearings[2]);
  const double c2 = (world[0] - world[1]).squaredNorm();
  const double b2 = (world[0] - world[2]).squaredNorm();
  const double a2 = (world[1] - world[2]).squaredNorm();
  if (a2 < 1e-16 || b2 < 1e-16 || c2 < 1e-16) return {};

  const double a4 =
      a2 * a2 - 2 * a2 * b2 - 2 * a2 * c2 + b2 * b2 + 2 * b2 * c2 + c2 * c2 - 4 * k3 * k3 * b2 * c2;
  const double a3 = -4 * (-k1 * k3 * a2 * b2 + k1 * k3 * b2 * b2 - k1 * k3 * b2 * c2 -
                          2 * k2 * k3 * k3 * b2 * c2 + k2 * a2 * a2 - k2 * a2 * b2 -
                          2 * k2 * a2 * c2 + k2 * b2 * c2 + k2 * c2 * c2);
  const double a2c = 2 * (-2 * k1 * k1 * a2 * b2 + 2 * k1 * k1 * b2 * b2 -
                          4 * k1 * k2 * k3 * a2 * b2 - 4 * k1 * k2 * k3 * b2 * c2 +
                          2 * k2 * k2 * a2 * a2 - 4 * k2 * k2 * a2 * c2 + 2 * k2 * k2 * c2 * c2 +
                          2 * k3 * k3 * b2 * b2 - 2 * k3 * k3 * b2 * c2 + a2 * a2 - 2 * a2 * c2 -
                          b2 * b2 + c2 * c2);
  const double a1 = -4 * (-2 * k1 * k1 * k2 * a2 * b2 - k1 * k3 * a2 * b2 + k1 * k3 * b2 * b2 -
                          k1 * k3 * b2 * c2 + k2 * a2 * a2 + k2 * a2 * b2 - 2 * k2 * a2 * c2 -
                          k2 * b2 * c2 + k2 * c2 * c2);
  const double a0 =
      a2 * a2 + 2 * a2 * b2 - 2 * a2 * c2 + b2 * b2 - 2 * b2 * c2 + c2 * c2 - 4 * k1 * k1 * a2 * b2;

  std::vector<Pose> poses;
  for (double v : real_roots({a4, a3, a2c, a1, a0})) {
    const double big_l = 1.0 + v * v - 2.0 * v * k2;
    if (big_l <= 1e-14) continue;
    const double s1 = std::sqrt(b2 / big_l);

    std::vector<double> us;
    const double denom = 2.0 * b2 * (k1 - k3 * v);
    if (std::abs(denom) > 1e-12 * b2) {
      us.push_back((b2 - c2 * big_l - b2 * v * v + a2 * big_l) / denom);
    } else {
      // Degenerate linear relation; fall back to the quadratic in u.
      const double disc = k1 * k1 - 1.0 + (c2 / b2) * big_l;
      if (disc < 0.0) continue;
      const double sq = std::sqrt(disc);
      us.push_back(k1 + sq);
      us.push_back(k1 - sq);
    }
    for (double u : us) {
      const double s2 = u * s1;
      const double s3 = v * s1;
      if (!(s1 > 0.0 && s2 > 0.0 && s3 > 0.0)) continue;
      const std::array<Vec3, 3> cam = {bearings[0] * s1, bearings[1] * s2, bearings[2] * s3};
      poses.push_back(align_rigid(world, cam));
    }
  }
  return poses;
}

double subset_rmse_px(std::span<const Correspondence> correspondences,
                      const CameraIntrinsics& intrinsics, const Pose& pose,
                      std::span<const int> subset) {
  if (subset.empty()) return 0.0;
  double sum = 0.0;
  for (int idx : subset) {
    const auto& c = correspondences[idx];
    const PixelProjection p = project_point(intrinsics, pose, c.world);
    if (!p.in_front) {
      sum += 1e12;  // behind-camera points dominate any real error
      continue;
    }
    sum += (Vec2(p.u, p.v) - c.pixel).squaredNorm();
  }
  return std::sqrt(sum / subset.size());
}

Pose refine_pose(std::span<const Correspondence> correspondences,
                 const CameraIntrinsics& intrinsics, const Pose& init,
                 std::span<const int> subset) {
  using Vec6 = Eigen::Matrix<double, 6, 1>;
  using Mat6 = Eigen::Matrix<double, 6, 6>;

  Pose pose = init;
  double cost = subset_rmse_px(correspondences, intrinsics, pose, subset);
  for (int iter = 0; iter < 25; ++iter) {
    Mat6 jtj = Mat6::Zero();
    Vec6 jtr = Vec6::Zero();
    for (int idx : subset) {
      const auto& c = correspondences[idx];
      const Vec3 p = pose.rotation * c.world + pose.translation;
      if (p.z() <= kDepthEpsilon) continue;
      const double iz = 1.0 / p.z();
      const Vec2 pred(intrinsics.fx * p.x() * iz + intrinsics.cx,
                      intrinsics.fy * p.y() * iz + intrinsics.cy);
      const Vec2 r = c.pixel - pred;
      Eigen::Matrix<double, 2, 3> duv_dp;
      duv_dp << intrinsics.fx * iz, 0.0, -intrinsics.fx * p.x() * iz * iz, 0.0,
          intrinsics.fy * iz, -intrinsics.fy * p.y() * iz * iz;
      // Left perturbation p' = exp(w^) p + dt  =>  dp/dw = -[p]x, dp/dt = I.
      Eigen::Matrix<double, 3, 6> dp_dxi;
      Mat3 skew;
      skew << 0.0, -p.z(), p.y(), p.z(), 0.0, -p.x(), -p.y(), p.x(), 0.0;
      dp_dxi.block<3, 3>(0, 0) = -skew;
      dp_dxi.block<3, 3>(0, 3) = Mat3::Identity();
      const Eigen::Matrix<double, 2, 6> j = duv_dp * dp_dxi;
      jtj += j.transpose() * j;
      jtr += j.transpose() * r;
    }
    const Vec6 delta = jtj.ldlt().solve(jtr);
    if (!delta.allFinite() || delta.norm() < 1e-14) break;

    // Backtracking line search keeps the subset RMSE monotone.
    bool accepted = false;
    for (double step = 1.0; step > 1.0 / 256.0; step *= 0.5) {
      const Vec3 omega = step * delta.head<3>();
      const Vec3 dt = step * delta.tail<3>();
      Pose trial = pose;
      const double angle = omega.norm();
      const Mat3 dr = angle < 1e-14 ? Mat3::Identity() : rodrigues(omega / angle, angle);
      trial.rotation = dr * pose.rotation;
      trial.translation = dr * pose.translation + dt;
      const double trial_cost = subset_rmse_px(correspondences, intrinsics, trial, subset);
      if (trial_cost < cost) {
        pose = trial;
        cost = trial_cost;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return pose;
}

}  // namespace detail

std::optional<PnpResult> solve_pnp_ransac(std::span<const Correspondence> correspondences,
                                          const CameraIntrinsics& intrinsics,
                                          const RansacConfig& cfg) {
  intrinsics.require_valid();
  const int n = static_cast<int>(correspondences.size());
  if (n < 4) throw std::invalid_argument("solve_pnp_ransac: need at least 4 correspondences");

  std::vector<Vec3> bearings(n);
  for (int i = 0; i < n; ++i) {
    const Vec2& px = correspondences[i].pixel;
    bearings[i] = Vec3((px.x() - intrinsics.cx) / intrinsics.fx,
                       (px.y() - intrinsics.cy) / intrinsics.fy, 1.0)
                      .normalized();
  }

  const double thresh_sq = cfg.thresh_px * cfg.thresh_px;
  auto collect_inliers = [&](const Pose& pose, std::vector<int>& out) {
    out.clear();
    for (int i = 0; i < n; ++i) {
      const PixelProjection p = project_point(intrinsics, pose, correspondences[i].world);
      if (!p.in_front) continue;
      if ((Vec2(p.u, p.v) - correspondences[i].pixel).squaredNorm() < thresh_sq) out.push_back(i);
    }
  };

  Rng rng(cfg.seed);
  Pose best_pose;
  std::vector<int> best_inliers;
  std::vector<int> inliers;
  int required_iters = cfg.max_iters;
  for (int iter = 0; iter < cfg.max_iters && iter < required_iters; ++iter) {
    int idx[4];
    idx[0] = rng.uniform_int(n);
    for (int k = 1; k < 4; ++k) {
      bool dup;
      do {
        idx[k] = rng.uniform_int(n);
        dup = false;
        for (int j = 0; j < k; ++j) dup |= idx[j] == idx[k];
      } while (dup);
    }
    const std::array<Vec3, 3> world = {correspondences[idx[0]].world, correspondences[idx[1]].world,
                                       correspondences[idx[2]].world};
    const std::array<Vec3, 3> rays = {bearings[idx[0]], bearings[idx[1]], bearings[idx[2]]};
    // The 4th sample point disambiguates the up-to-four P3P solutions.
    for (const Pose& pose : detail::solve_p3p(world, rays)) {
      const PixelProjection p4 = project_point(intrinsics, pose, correspondences[idx[3]].world);
      if (!p4.in_front) continue;
      if ((Vec2(p4.u, p4.v) - correspondences[idx[3]].pixel).squaredNorm() >= thresh_sq) continue;
      collect_inliers(pose, inliers);
      if (inliers.size() > best_inliers.size()) {
        best_pose = pose;
        best_inliers = inliers;
        const double w = static_cast<double>(best_inliers.size()) / n;
        const double denom = std::log(std::max(1e-12, 1.0 - w * w * w * w));
        if (denom < 0.0) {
          const double needed = std::ceil(std::log(1.0 - cfg.confidence) / denom);
          required_iters = static_cast<int>(std::min<double>(cfg.max_iters, needed));
        }
      }
    }
  }

  if (best_inliers.size() < 4 ||
      static_cast<double>(best_inliers.size()) < cfg.min_inlier_frac * n) {
    return std::nullopt;
  }

  // Two refine/reclassify rounds (local optimization step).
  Pose pose = detail::refine_pose(correspondences, intrinsics, best_pose, best_inliers);
  collect_inliers(pose, inliers);
  if (inliers.size() >= best_inliers.size()) best_inliers = inliers;
  pose = detail::refine_pose(correspondences, intrinsics, pose, best_inliers);
  collect_inliers(pose, inliers);
  if (inliers.size() >= best_inliers.size()) best_inliers = inliers;

  if (static_cast<double>(best_inliers.size()) < cfg.min_inlier_frac * n) return std::nullopt;

  PnpResult result;
  result.pose = pose;
  result.inliers = best_inliers;
  result.rmse_px = detail::subset_rmse_px(correspondences, intrinsics, pose, best_inliers);
  return result;
}

}  // namespace puzzlegen
