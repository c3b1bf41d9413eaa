// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0

#include "puzzlegen/augment2d.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace puzzlegen {

namespace {

Mat3 translation(double tx, double ty) {
  Mat3 m = Mat3::Identity();
  m(0, 2) = tx;
  m(1, 2) = ty;
  return m;
}

// Exact homography through four point correspondences (8x8 DLT).
Mat3 homography_from_corners(const Vec2 src[4], const Vec2 dst[4]) {
  Eigen::Matrix<double, 8, 8> a = Eigen::Matrix<double, 8, 8>::Zero();
  Eigen::Matrix<double, 8, 1> b;
  for (int i = 0; i < 4; ++i) {
    const double x = src[i].x(), y = src[i].y();
    const double u = dst[i].x(), v = dst[i].y();
    a.row(2 * i) << x, y, 1, 0, 0, 0, -u * x, -u * y;
    a.row(2 * i + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y;
    b(2 * i) = u;
    b(2 * i + 1) = v;
  }
  const Eigen::Matrix<double, 8, 1> h = a.fullPivLu().solve(b);
  Mat3 m;
  m << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1.0;
  return m;
}

}  // namespace

Warp2d sample_affine_warp(const Aug2dConfig& cfg, int width, int height, Rng& rng) {
  const double theta = rng.uniform(-cfg.rot_deg, cfg.rot_deg) * std::numbers::pi / 180.0;
  const double tx = rng.uniform(-cfg.trans_frac, cfg.trans_frac) * width;
  const double ty = rng.uniform(-cfg.trans_frac, cfg.trans_frac) * height;
  const double scale = rng.uniform(cfg.scale_min, cfg.scale_max);

  Warp2d w;
  if (theta == 0.0 && tx == 0.0 && ty == 0.0 && scale == 1.0) return w;

  const double cu = (width - 1) * 0.5;
  const double cv = (height - 1) * 0.5;
  Mat3 rs = Mat3::Identity();
  rs(0, 0) = std::cos(theta) * scale;
  rs(0, 1) = -std::sin(theta) * scale;
  rs(1, 0) = std::sin(theta) * scale;
  rs(1, 1) = std::cos(theta) * scale;
  w.forward = translation(tx, ty) * translation(cu, cv) * rs * translation(-cu, -cv);
  w.is_identity = false;
  return w;
}

Warp2d sample_perspective_warp(const Aug2dConfig& cfg, int width, int height, Rng& rng) {
  Warp2d w;
  if (!(rng.uniform() < cfg.persp_prob)) return w;

  const double du_max = cfg.persp_scale * width * 0.5;
  const double dv_max = cfg.persp_scale * height * 0.5;
  double du[4], dv[4];
  for (int i = 0; i < 4; ++i) {
    du[i] = rng.uniform(0.0, du_max);
    dv[i] = rng.uniform(0.0, dv_max);
  }
  if (du[0] == 0 && du[1] == 0 && du[2] == 0 && du[3] == 0 && dv[0] == 0 && dv[1] == 0 &&
      dv[2] == 0 && dv[3] == 0) {
    return w;
  }
  const double wm = width - 1, hm = height - 1;
  const Vec2 src[4] = {{0, 0}, {wm, 0}, {wm, hm}, {0, hm}};
  // Corners move inward only, like torchvision's RandomPerspective.
  const Vec2 dst[4] = {{du[0], dv[0]}, {wm - du[1], dv[1]}, {wm - du[2], hm - dv[2]},
                       {du[3], hm - dv[3]}};
  w.forward = homography_from_corners(src, dst);
  w.is_identity = false;
  return w;
}

ChannelBundle apply_warp(const ChannelBundle& in, const Warp2d& warp) {
  if (warp.is_identity) return in;

  const int w = in.rgb.width, h = in.rgb.height;
  ChannelBundle out;
  out.rgb = Image8(w, h, in.rgb.channels, 255);
  out.depth = DepthMap(w, h);
  out.mask.assign(static_cast<size_t>(w) * h, 0);
  const bool with_points = in.points.width == w && in.points.height == h;
  if (with_points) out.points = PointGrid(w, h);

  const Mat3 inv = warp.forward.inverse();
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const Vec3 q = inv * Vec3(u, v, 1.0);
      if (std::abs(q.z()) < 1e-12) continue;
      const double sx = q.x() / q.z();
      const double sy = q.y() / q.z();
      const int nx = static_cast<int>(std::lround(sx));
      const int ny = static_cast<int>(std::lround(sy));
      if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
      const size_t src = static_cast<size_t>(ny) * w + nx;
      if (!in.mask.empty() && !in.mask[src]) continue;

      const size_t dst = static_cast<size_t>(v) * w + u;
      out.mask[dst] = 1;
      out.depth.values[dst] = in.depth.values.empty() ? 0.0 : in.depth.values[src];
      if (with_points) {
        out.points.xs[dst] = in.points.xs[src];
        out.points.ys[dst] = in.points.ys[src];
        out.points.zs[dst] = in.points.zs[src];
        out.points.valid[dst] = in.points.valid[src];
      }

      // Bilinear RGB at the exact source location, clamped to the border.
      const int x0 = std::clamp(static_cast<int>(std::floor(sx)), 0, w - 1);
      const int y0 = std::clamp(static_cast<int>(std::floor(sy)), 0, h - 1);
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double fx = std::clamp(sx - x0, 0.0, 1.0);
      const double fy = std::clamp(sy - y0, 0.0, 1.0);
      for (int c = 0; c < in.rgb.channels; ++c) {
        const double top = (1.0 - fx) * in.rgb.at(x0, y0, c) + fx * in.rgb.at(x1, y0, c);
        const double bot = (1.0 - fx) * in.rgb.at(x0, y1, c) + fx * in.rgb.at(x1, y1, c);
        const double val = (1.0 - fy) * top + fy * bot;
        out.rgb.at(u, v, c) = static_cast<uint8_t>(std::lround(std::clamp(val, 0.0, 255.0)));
      }
    }
  }
  return out;
}

ChannelBundle random_affine(const ChannelBundle& in, const Aug2dConfig& cfg, uint64_t seed) {
  Rng rng(seed);
  return apply_warp(in, sample_affine_warp(cfg, in.rgb.width, in.rgb.height, rng));
}

ChannelBundle random_perspective(const ChannelBundle& in, const Aug2dConfig& cfg, uint64_t seed) {
  Rng rng(seed);
  return apply_warp(in, sample_perspective_warp(cfg, in.rgb.width, in.rgb.height, rng));
}

}  // namespace puzzlegen
