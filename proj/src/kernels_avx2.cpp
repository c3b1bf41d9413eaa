// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
//
// AVX2 kernel variants, 4 doubles per lane. Operation order mirrors the
// scalar reference exactly (no FMA) so the two backends are bit-identical;
// the equivalence tests enforce that.

#include "puzzlegen/kernels.hpp"

#include <cmath>

#ifdef __AVX2__

#include <immintrin.h>

namespace puzzlegen::kernels {
namespace {

const __m256d kHalf = _mm256_set1_pd(0.5);
const __m256d kZero = _mm256_setzero_pd();

inline int mask_bits(__m256d m) { return _mm256_movemask_pd(m); }

void unproject_grid_avx2(const double* depth, int width, int height, double fx, double fy,
                         double cx, double cy, double* xs, double* ys, double* zs) {
  const double inv_fx = 1.0 / fx;
  const double inv_fy = 1.0 / fy;
  const __m256d vinv_fx = _mm256_set1_pd(inv_fx);
  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d ramp = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const int wq = width & ~3;
  for (int v = 0; v < height; ++v) {
    const double yc = (static_cast<double>(v) - cy) * inv_fy;
    const __m256d vyc = _mm256_set1_pd(yc);
    const std::size_t row = static_cast<std::size_t>(v) * width;
    int u = 0;
    for (; u < wq; u += 4) {
      const std::size_t i = row + u;
      const __m256d d = _mm256_loadu_pd(depth + i);
      const __m256d uu = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(u)), ramp);
      const __m256d xc = _mm256_mul_pd(_mm256_sub_pd(uu, vcx), vinv_fx);
      _mm256_storeu_pd(xs + i, _mm256_mul_pd(xc, d));
      _mm256_storeu_pd(ys + i, _mm256_mul_pd(vyc, d));
      _mm256_storeu_pd(zs + i, d);
    }
    for (; u < width; ++u) {
      const std::size_t i = row + u;
      const double d = depth[i];
      xs[i] = (static_cast<double>(u) - cx) * inv_fx * d;
      ys[i] = yc * d;
      zs[i] = d;
    }
  }
}

void transform_points_avx2(const double rot[9], const double trans[3], const double* xs,
                           const double* ys, const double* zs, std::size_t n, double* out_x,
                           double* out_y, double* out_z) {
  const __m256d r0 = _mm256_set1_pd(rot[0]), r1 = _mm256_set1_pd(rot[1]), r2 = _mm256_set1_pd(rot[2]);
  const __m256d r3 = _mm256_set1_pd(rot[3]), r4 = _mm256_set1_pd(rot[4]), r5 = _mm256_set1_pd(rot[5]);
  const __m256d r6 = _mm256_set1_pd(rot[6]), r7 = _mm256_set1_pd(rot[7]), r8 = _mm256_set1_pd(rot[8]);
  const __m256d t0 = _mm256_set1_pd(trans[0]), t1 = _mm256_set1_pd(trans[1]), t2 = _mm256_set1_pd(trans[2]);
  const std::size_t nq = n & ~std::size_t(3);
  std::size_t i = 0;
  for (; i < nq; i += 4) {
    const __m256d x = _mm256_loadu_pd(xs + i);
    const __m256d y = _mm256_loadu_pd(ys + i);
    const __m256d z = _mm256_loadu_pd(zs + i);
    __m256d ox = _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(r0, x), _mm256_mul_pd(r1, y)), _mm256_mul_pd(r2, z)), t0);
    __m256d oy = _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(r3, x), _mm256_mul_pd(r4, y)), _mm256_mul_pd(r5, z)), t1);
    __m256d oz = _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(r6, x), _mm256_mul_pd(r7, y)), _mm256_mul_pd(r8, z)), t2);
    _mm256_storeu_pd(out_x + i, ox);
    _mm256_storeu_pd(out_y + i, oy);
    _mm256_storeu_pd(out_z + i, oz);
  }
  for (; i < n; ++i) {
    const double x = xs[i], y = ys[i], z = zs[i];
    out_x[i] = rot[0] * x + rot[1] * y + rot[2] * z + trans[0];
    out_y[i] = rot[3] * x + rot[4] * y + rot[5] * z + trans[1];
    out_z[i] = rot[6] * x + rot[7] * y + rot[8] * z + trans[2];
  }
}

void project_points_avx2(double fx, double fy, double cx, double cy, const double* xs,
                         const double* ys, const double* zs, std::size_t n, double* us,
                         double* vs) {
  const __m256d vfx = _mm256_set1_pd(fx), vfy = _mm256_set1_pd(fy);
  const __m256d vcx = _mm256_set1_pd(cx), vcy = _mm256_set1_pd(cy);
  const std::size_t nq = n & ~std::size_t(3);
  std::size_t i = 0;
  for (; i < nq; i += 4) {
    const __m256d z = _mm256_loadu_pd(zs + i);
    const __m256d u = _mm256_add_pd(_mm256_mul_pd(vfx, _mm256_div_pd(_mm256_loadu_pd(xs + i), z)), vcx);
    const __m256d v = _mm256_add_pd(_mm256_mul_pd(vfy, _mm256_div_pd(_mm256_loadu_pd(ys + i), z)), vcy);
    _mm256_storeu_pd(us + i, u);
    _mm256_storeu_pd(vs + i, v);
  }
  for (; i < n; ++i) {
    const double z = zs[i];
    us[i] = fx * (xs[i] / z) + cx;
    vs[i] = fy * (ys[i] / z) + cy;
  }
}

std::size_t count_front_facing_avx2(const double* px, const double* py, const double* pz,
                                    const double* nx, const double* ny, const double* nz,
                                    std::size_t n, const double center[3], double cos_threshold) {
  const __m256d c0 = _mm256_set1_pd(center[0]);
  const __m256d c1 = _mm256_set1_pd(center[1]);
  const __m256d c2 = _mm256_set1_pd(center[2]);
  const __m256d ct = _mm256_set1_pd(cos_threshold);
  const std::size_t nq = n & ~std::size_t(3);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i < nq; i += 4) {
    const __m256d dx = _mm256_sub_pd(c0, _mm256_loadu_pd(px + i));
    const __m256d dy = _mm256_sub_pd(c1, _mm256_loadu_pd(py + i));
    const __m256d dz = _mm256_sub_pd(c2, _mm256_loadu_pd(pz + i));
    const __m256d len = _mm256_sqrt_pd(_mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)), _mm256_mul_pd(dz, dz)));
    const __m256d dot = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(nx + i), dx),
                      _mm256_mul_pd(_mm256_loadu_pd(ny + i), dy)),
        _mm256_mul_pd(_mm256_loadu_pd(nz + i), dz));
    const __m256d hit = _mm256_cmp_pd(dot, _mm256_mul_pd(ct, len), _CMP_GT_OQ);
    count += static_cast<std::size_t>(__builtin_popcount(mask_bits(hit)));
  }
  for (; i < n; ++i) {
    const double dx = center[0] - px[i];
    const double dy = center[1] - py[i];
    const double dz = center[2] - pz[i];
    const double len = std::sqrt(dx * dx + dy * dy + dz * dz);
    const double dot = nx[i] * dx + ny[i] * dy + nz[i] * dz;
    if (dot > cos_threshold * len) ++count;
  }
  return count;
}

std::size_t count_depth_consistent_avx2(const double* us, const double* vs, const double* zs,
                                        std::size_t n, const double* ref_depth, int width,
                                        int height, double tol) {
  const __m256d wlim = _mm256_set1_pd(static_cast<double>(width - 1));
  const __m256d hlim = _mm256_set1_pd(static_cast<double>(height - 1));
  const __m256d vw = _mm256_set1_pd(static_cast<double>(width));
  const __m256d vtol = _mm256_set1_pd(tol);
  const __m256d sign_clear = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const std::size_t nq = n & ~std::size_t(3);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i < nq; i += 4) {
    const __m256d z = _mm256_loadu_pd(zs + i);
    const __m256d pu = _mm256_floor_pd(_mm256_add_pd(_mm256_loadu_pd(us + i), kHalf));
    const __m256d pv = _mm256_floor_pd(_mm256_add_pd(_mm256_loadu_pd(vs + i), kHalf));
    __m256d ok = _mm256_cmp_pd(z, kZero, _CMP_GT_OQ);
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(pu, kZero, _CMP_GE_OQ));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(pu, wlim, _CMP_LE_OQ));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(pv, kZero, _CMP_GE_OQ));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(pv, hlim, _CMP_LE_OQ));
    if (mask_bits(ok) == 0) continue;
    // Exact integer arithmetic in doubles, then truncate; out-of-bounds lanes
    // are masked off and their index forced to 0 before the gather.
    const __m256d idx_d = _mm256_add_pd(_mm256_mul_pd(pv, vw), pu);
    const __m128i idx = _mm256_cvttpd_epi32(_mm256_and_pd(idx_d, ok));
    const __m256d ref = _mm256_mask_i32gather_pd(kZero, ref_depth, idx, ok, 8);
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(ref, kZero, _CMP_GT_OQ));
    const __m256d diff = _mm256_and_pd(_mm256_sub_pd(z, ref), sign_clear);
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(diff, vtol, _CMP_LT_OQ));
    count += static_cast<std::size_t>(__builtin_popcount(mask_bits(ok)));
  }
  const double wlim_s = static_cast<double>(width - 1);
  const double hlim_s = static_cast<double>(height - 1);
  for (; i < n; ++i) {
    const double z = zs[i];
    if (!(z > 0.0)) continue;
    const double pu = std::floor(us[i] + 0.5);
    const double pv = std::floor(vs[i] + 0.5);
    if (!(pu >= 0.0 && pu <= wlim_s && pv >= 0.0 && pv <= hlim_s)) continue;
    const double ref = ref_depth[static_cast<std::size_t>(pv) * width + static_cast<std::size_t>(pu)];
    if (ref > 0.0 && std::fabs(z - ref) < tol) ++count;
  }
  return count;
}

}  // namespace

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

const KernelTable& avx2_table() {
  static const KernelTable table = {
      "avx2",
      unproject_grid_avx2,
      transform_points_avx2,
      project_points_avx2,
      count_front_facing_avx2,
      count_depth_consistent_avx2,
  };
  return table;
}

}  // namespace puzzlegen::kernels

#else  // !__AVX2__

namespace puzzlegen::kernels {

bool avx2_supported() { return false; }
const KernelTable& avx2_table() { return scalar_table(); }

}  // namespace puzzlegen::kernels

#endif
