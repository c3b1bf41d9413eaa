// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace puzzlegen {

using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Bad or infeasible configuration (unknown key, out-of-range value, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unusable input data (empty depth, missing file, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Randomized search exhausted its retry budget.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pinhole intrinsics in pixels. Pixel (u, v) samples the ray through
/// (u, v) exactly; there is no half-pixel offset anywhere in this codebase.
struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  bool valid() const {
    return fx > 0.0 && fy > 0.0 && std::isfinite(fx) && std::isfinite(fy) &&
           std::isfinite(cx) && std::isfinite(cy);
  }
  void require_valid() const {
    if (!valid()) throw std::invalid_argument("invalid camera intrinsics (focal must be > 0 and finite)");
  }
  Mat3 matrix() const {
    Mat3 k = Mat3::Identity();
    k(0, 0) = fx;
    k(1, 1) = fy;
    k(0, 2) = cx;
    k(1, 2) = cy;
    return k;
  }
};

/// Rigid transform, world-to-camera unless a variable name says otherwise:
/// p_cam = rotation * p_world + translation.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  bool valid(double tol = 1e-9) const {
    const Mat3 err = rotation.transpose() * rotation - Mat3::Identity();
    return err.cwiseAbs().maxCoeff() < tol && std::abs(rotation.determinant() - 1.0) < tol &&
           translation.allFinite();
  }
};

/// Depth in meters; 0 marks an invalid sample.
struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  DepthMap() = default;
  DepthMap(int w, int h) : width(w), height(h), values(static_cast<size_t>(w) * h, 0.0) {}

  double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
  double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
  size_t size() const { return values.size(); }
};

/// 8-bit interleaved image, row-major.
struct Image8 {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<uint8_t> data;

  Image8() = default;
  Image8(int w, int h, int c, uint8_t fill = 0)
      : width(w), height(h), channels(c), data(static_cast<size_t>(w) * h * c, fill) {}

  uint8_t at(int x, int y, int c) const {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  uint8_t& at(int x, int y, int c) {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
};

/// Grid of 3D vectors stored planar (x/y/z in separate arrays) so kernels can
/// stream them. Used both for pointmaps and normal maps.
struct PointGrid {
  int width = 0;
  int height = 0;
  std::vector<double> xs, ys, zs;
  std::vector<uint8_t> valid;

  PointGrid() = default;
  PointGrid(int w, int h)
      : width(w),
        height(h),
        xs(static_cast<size_t>(w) * h, 0.0),
        ys(static_cast<size_t>(w) * h, 0.0),
        zs(static_cast<size_t>(w) * h, 0.0),
        valid(static_cast<size_t>(w) * h, 0) {}

  size_t index(int x, int y) const { return static_cast<size_t>(y) * width + x; }
  Vec3 point(int x, int y) const {
    const size_t i = index(x, y);
    return {xs[i], ys[i], zs[i]};
  }
  void set_point(int x, int y, const Vec3& p, bool ok = true) {
    const size_t i = index(x, y);
    xs[i] = p.x();
    ys[i] = p.y();
    zs[i] = p.z();
    valid[i] = ok ? 1 : 0;
  }
  size_t size() const { return xs.size(); }
};

/// Loose collection of 3D points in planar layout.
struct PointSet {
  std::vector<double> xs, ys, zs;

  size_t size() const { return xs.size(); }
  void push_back(const Vec3& p) {
    xs.push_back(p.x());
    ys.push_back(p.y());
    zs.push_back(p.z());
  }
  Vec3 point(size_t i) const { return {xs[i], ys[i], zs[i]}; }
  void reserve(size_t n) {
    xs.reserve(n);
    ys.reserve(n);
    zs.reserve(n);
  }
};

/// One RGB-D view with its unprojected geometry. `points` are expressed in
/// the world frame (camera frame when the pose is identity); valid(u,v) holds
/// exactly where depth(u,v) > 0.
struct PointmapFrame {
  int width = 0;
  int height = 0;
  Image8 rgb;
  DepthMap depth;
  PointGrid points;
  CameraIntrinsics intrinsics;
  Pose w2c;
};

/// Axis-aligned pixel rectangle [u1,u2) x [v1,v2), integer corners.
struct PatchBox {
  int u1 = 0, v1 = 0, u2 = 0, v2 = 0;

  int width() const { return u2 - u1; }
  int height() const { return v2 - v1; }
  long long area() const { return static_cast<long long>(width()) * height(); }
  bool valid_within(int frame_w, int frame_h) const {
    return u1 >= 0 && v1 >= 0 && u1 < u2 && v1 < v2 && u2 <= frame_w && v2 <= frame_h;
  }
};

}  // namespace puzzlegen
