// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
//
// Reference kernels. These define the numeric contract; the SIMD variants
// must reproduce them bit for bit (see test_kernels.cpp).

#include "puzzlegen/kernels.hpp"

#include <cmath>

namespace puzzlegen::kernels {
namespace {

void unproject_grid_scalar(const double* depth, int width, int height, double fx, double fy,
                           double cx, double cy, double* xs, double* ys, double* zs) {
  const double inv_fx = 1.0 / fx;
  const double inv_fy = 1.0 / fy;
  std::size_t i = 0;
  for (int v = 0; v < height; ++v) {
    const double yc = (static_cast<double>(v) - cy) * inv_fy;
    for (int u = 0; u < width; ++u, ++i) {
      const double d = depth[i];
      xs[i] = (static_cast<double>(u) - cx) * inv_fx * d;
      ys[i] = yc * d;
      zs[i] = d;
    }
  }
}

void transform_points_scalar(const double rot[9], const double trans[3], const double* xs,
                             const double* ys, const double* zs, std::size_t n, double* out_x,
                             double* out_y, double* out_z) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = xs[i], y = ys[i], z = zs[i];
    out_x[i] = rot[0] * x + rot[1] * y + rot[2] * z + trans[0];
    out_y[i] = rot[3] * x + rot[4] * y + rot[5] * z + trans[1];
    out_z[i] = rot[6] * x + rot[7] * y + rot[8] * z + trans[2];
  }
}

void project_points_scalar(double fx, double fy, double cx, double cy, const double* xs,
                           const double* ys, const double* zs, std::size_t n, double* us,
                           double* vs) {
  for (std::size_t i = 0; i < n; ++i) {
    const double z = zs[i];
    us[i] = fx * (xs[i] / z) + cx;
    vs[i] = fy * (ys[i] / z) + cy;
  }
}

std::size_t count_front_facing_scalar(const double* px, const double* py, const double* pz,
                                      const double* nx, const double* ny, const double* nz,
                                      std::size_t n, const double center[3],
                                      double cos_threshold) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = center[0] - px[i];
    const double dy = center[1] - py[i];
    const double dz = center[2] - pz[i];
    const double len = std::sqrt(dx * dx + dy * dy + dz * dz);
    const double dot = nx[i] * dx + ny[i] * dy + nz[i] * dz;
    // dot/len > cos_t, written division-free so both backends agree exactly.
    if (dot > cos_threshold * len) ++count;
  }
  return count;
}

std::size_t count_depth_consistent_scalar(const double* us, const double* vs, const double* zs,
                                          std::size_t n, const double* ref_depth, int width,
                                          int height, double tol) {
  const double wlim = static_cast<double>(width - 1);
  const double hlim = static_cast<double>(height - 1);
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = zs[i];
    if (!(z > 0.0)) continue;
    const double pu = std::floor(us[i] + 0.5);
    const double pv = std::floor(vs[i] + 0.5);
    if (!(pu >= 0.0 && pu <= wlim && pv >= 0.0 && pv <= hlim)) continue;
    const double ref = ref_depth[static_cast<std::size_t>(pv) * width + static_cast<std::size_t>(pu)];
    if (ref > 0.0 && std::fabs(z - ref) < tol) ++count;
  }
  return count;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {
      "scalar",
      unproject_grid_scalar,
      transform_points_scalar,
      project_points_scalar,
      count_front_facing_scalar,
      count_depth_consistent_scalar,
  };
  return table;
}

}  // namespace puzzlegen::kernels
