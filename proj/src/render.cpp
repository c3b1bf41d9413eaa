// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0

#include "puzzlegen/render.hpp"

#include <cmath>
#include <limits>

#include "puzzlegen/geometry.hpp"
#include "puzzlegen/kernels.hpp"

namespace puzzlegen {

RenderResult render_pointcloud(const PointCloud& cloud, const Pose& w2c,
                               const CameraIntrinsics& intrinsics, int width, int height,
                               const SplatConfig& cfg) {
  intrinsics.require_valid();
  if (width <= 0 || height <= 0) throw std::invalid_argument("render: bad target size");

  const size_t npix = static_cast<size_t>(width) * height;
  RenderResult out;
  out.rgb = Image8(width, height, 3, 255);
  out.depth = DepthMap(width, height);
  out.hole_mask.assign(npix, 1);

  const size_t n = cloud.size();
  if (n > 0) {
    std::vector<double> cx(n), cy(n), cz(n), us(n), vs(n);
    double rot[9], trans[3] = {w2c.translation.x(), w2c.translation.y(), w2c.translation.z()};
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) rot[r * 3 + c] = w2c.rotation(r, c);
    const auto& k = kernels::active();
    k.transform_points(rot, trans, cloud.xs.data(), cloud.ys.data(), cloud.zs.data(), n, cx.data(),
                       cy.data(), cz.data());
    k.project_points(intrinsics.fx, intrinsics.fy, intrinsics.cx, intrinsics.cy, cx.data(),
                     cy.data(), cz.data(), n, us.data(), vs.data());

    std::vector<double> zbuf(npix, std::numeric_limits<double>::infinity());
    const int radius = std::max(0, (cfg.splat_px - 1) / 2);
    // Sequential over input order: z-buffer ties keep the earlier point.
    for (size_t i = 0; i < n; ++i) {
      const double z = cz[i];
      if (!(z > kDepthEpsilon)) continue;
      const int pu = static_cast<int>(std::floor(us[i] + 0.5));
      const int pv = static_cast<int>(std::floor(vs[i] + 0.5));
      for (int dy = -radius; dy <= radius; ++dy) {
        const int y = pv + dy;
        if (y < 0 || y >= height) continue;
        for (int dx = -radius; dx <= radius; ++dx) {
          const int x = pu + dx;
          if (x < 0 || x >= width) continue;
          const size_t pix = static_cast<size_t>(y) * width + x;
          if (z < zbuf[pix]) {
            zbuf[pix] = z;
            out.rgb.data[pix * 3 + 0] = cloud.colors[i * 3 + 0];
            out.rgb.data[pix * 3 + 1] = cloud.colors[i * 3 + 1];
            out.rgb.data[pix * 3 + 2] = cloud.colors[i * 3 + 2];
            out.hole_mask[pix] = 0;
          }
        }
      }
    }
    for (size_t i = 0; i < npix; ++i) {
      if (!out.hole_mask[i]) out.depth.values[i] = zbuf[i];
    }

    if (cfg.dilate) {
      // Close pinholes: a hole with >= 5 covered 8-neighbors takes the color
      // and depth of its nearest-depth covered neighbor. Reads the pre-pass
      // state so the fill order cannot matter.
      const std::vector<uint8_t> holes = out.hole_mask;
      const std::vector<double> depths = out.depth.values;
      const std::vector<uint8_t> colors = out.rgb.data;
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          const size_t pix = static_cast<size_t>(y) * width + x;
          if (!holes[pix]) continue;
          int covered = 0;
          size_t best = npix;
          double best_z = std::numeric_limits<double>::infinity();
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              if (dx == 0 && dy == 0) continue;
              const int nx2 = x + dx, ny2 = y + dy;
              if (nx2 < 0 || nx2 >= width || ny2 < 0 || ny2 >= height) continue;
              const size_t np = static_cast<size_t>(ny2) * width + nx2;
              if (holes[np]) continue;
              ++covered;
              if (depths[np] < best_z) {
                best_z = depths[np];
                best = np;
              }
            }
          }
          if (covered >= 5 && best < npix) {
            out.depth.values[pix] = depths[best];
            out.rgb.data[pix * 3 + 0] = colors[best * 3 + 0];
            out.rgb.data[pix * 3 + 1] = colors[best * 3 + 1];
            out.rgb.data[pix * 3 + 2] = colors[best * 3 + 2];
            out.hole_mask[pix] = 0;
          }
        }
      }
    }
  }

  size_t holes = 0;
  for (uint8_t m : out.hole_mask) holes += m;
  out.hole_fraction = static_cast<double>(holes) / static_cast<double>(npix);
  return out;
}

bool gate_by_holes(const RenderResult& result, double hole_max_frac) {
  return !(result.hole_fraction > hole_max_frac);
}

}  // namespace puzzlegen
