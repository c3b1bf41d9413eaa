// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

namespace puzzlegen::kernels {

enum class Backend { kScalar, kAvx2 };

// The hot inner loops of the toolkit, batched over planar arrays. Every entry
// has a scalar reference implementation and (on x86) an AVX2 variant that is
// bit-identical to it: same operation order, no FMA, IEEE div/sqrt only.
struct KernelTable {
  const char* name;

  // x = (u - cx) * d / fx, y = (v - cy) * d / fy, z = d for every pixel of a
  // row-major depth grid. Zero depth yields the zero point.
  void (*unproject_grid)(const double* depth, int width, int height, double fx, double fy,
                         double cx, double cy, double* xs, double* ys, double* zs);

  // out = R * p + t, rot row-major 3x3.
  void (*transform_points)(const double rot[9], const double trans[3], const double* xs,
                           const double* ys, const double* zs, std::size_t n, double* out_x,
                           double* out_y, double* out_z);

  // u = fx * (x / z) + cx, v = fy * (y / z) + cy for camera-frame points.
  // Callers are responsible for filtering non-positive z.
  void (*project_points)(double fx, double fy, double cx, double cy, const double* xs,
                         const double* ys, const double* zs, std::size_t n, double* us,
                         double* vs);

  // Counts points whose unit normal faces the camera center within the angular
  // threshold: dot(n, c - p) > cos_threshold * |c - p|.
  std::size_t (*count_front_facing)(const double* px, const double* py, const double* pz,
                                    const double* nx, const double* ny, const double* nz,
                                    std::size_t n, const double center[3], double cos_threshold);

  // Counts projected samples that land in-bounds (nearest pixel = floor(c+0.5))
  // on valid reference depth and agree with it within tol: z > 0, 0 <= px < w,
  // 0 <= py < h, ref > 0, |z - ref| < tol.
  std::size_t (*count_depth_consistent)(const double* us, const double* vs, const double* zs,
                                        std::size_t n, const double* ref_depth, int width,
                                        int height, double tol);
};

const KernelTable& scalar_table();

// True when this build carries AVX2 kernels and the CPU can run them.
bool avx2_supported();
const KernelTable& avx2_table();

// Runtime-selected table. Defaults to the best supported backend; the
// PUZZLEGEN_KERNELS environment variable (scalar|avx2|auto) overrides, and
// set_backend() overrides both (tests use it to cross-check variants).
const KernelTable& active();
Backend active_backend();
void set_backend(Backend backend);

}  // namespace puzzlegen::kernels
