// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0

#include "puzzlegen/covisibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "puzzlegen/geometry.hpp"
#include "puzzlegen/kernels.hpp"
#include "puzzlegen/parallel.hpp"

namespace puzzlegen {

ViewFrame ViewFrame::build(DepthMap depth, const CameraIntrinsics& intrinsics, const Pose& w2c) {
  ViewFrame f;
  f.intrinsics = intrinsics;
  f.w2c = w2c;
  PointmapFrame pm = build_pointmap_frame(Image8(depth.width, depth.height, 3), std::move(depth),
                                          intrinsics, w2c);
  f.world_points = std::move(pm.points);
  f.depth = std::move(pm.depth);

  std::vector<double> valid_depths;
  valid_depths.reserve(f.depth.size());
  for (double d : f.depth.values) {
    if (d > 0.0) valid_depths.push_back(d);
  }
  if (!valid_depths.empty()) {
    auto mid = valid_depths.begin() + valid_depths.size() / 2;
    std::nth_element(valid_depths.begin(), mid, valid_depths.end());
    f.median_depth = *mid;
  }
  return f;
}

std::optional<double> overlap_score(const ViewFrame& source, const ViewFrame& reference,
                                    const CovisConfig& cfg) {
  const int stride = std::max(1, cfg.stride);
  const auto& pts = source.world_points;

  // Gather the strided valid source points.
  std::vector<double> sx, sy, sz;
  for (int y = 0; y < pts.height; y += stride) {
    for (int x = 0; x < pts.width; x += stride) {
      const size_t i = pts.index(x, y);
      if (!pts.valid[i]) continue;
      sx.push_back(pts.xs[i]);
      sy.push_back(pts.ys[i]);
      sz.push_back(pts.zs[i]);
    }
  }
  const size_t n = sx.size();
  if (n == 0) return std::nullopt;

  std::vector<double> cx(n), cy(n), cz(n), us(n), vs(n);
  double rot[9], trans[3] = {reference.w2c.translation.x(), reference.w2c.translation.y(),
                             reference.w2c.translation.z()};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) rot[r * 3 + c] = reference.w2c.rotation(r, c);
  const auto& k = kernels::active();
  k.transform_points(rot, trans, sx.data(), sy.data(), sz.data(), n, cx.data(), cy.data(),
                     cz.data());
  k.project_points(reference.intrinsics.fx, reference.intrinsics.fy, reference.intrinsics.cx,
                   reference.intrinsics.cy, cx.data(), cy.data(), cz.data(), n, us.data(),
                   vs.data());
  const size_t hits =
      k.count_depth_consistent(us.data(), vs.data(), cz.data(), n, reference.depth.values.data(),
                               reference.depth.width, reference.depth.height,
                               cfg.tolerance_for(reference));
  return static_cast<double>(hits) / static_cast<double>(n);
}

OverlapMatrix overlap_matrix(std::span<const ViewFrame> frames, const CovisConfig& cfg) {
  const int n = static_cast<int>(frames.size());
  if (n == 0) throw std::invalid_argument("overlap_matrix: need at least one frame");
  OverlapMatrix m(n);
  std::vector<uint8_t> undefined(static_cast<size_t>(n) * n, 0);
  parallel_for(static_cast<size_t>(n) * n, [&](size_t cell) {
    const int i = static_cast<int>(cell) / n;
    const int j = static_cast<int>(cell) % n;
    const auto score = overlap_score(frames[i], frames[j], cfg);
    if (score) {
      m.values[cell] = *score;
    } else {
      undefined[cell] = 1;
    }
  });
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (undefined[static_cast<size_t>(i) * n + j]) {
        std::ostringstream os;
        os << "overlap(" << i << "," << j << ") undefined (no valid source pixels); recorded as 0";
        m.warnings.push_back(os.str());
      }
    }
  }
  return m;
}

std::string overlap_matrix_to_csv(const OverlapMatrix& m) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed;
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j < m.n; ++j) {
      if (j) os << ",";
      os << m.at(i, j);
    }
    os << "\n";
  }
  return os.str();
}

OverlapMatrix overlap_matrix_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw InputError("overlap matrix CSV: no rows");
  OverlapMatrix m(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      throw InputError("overlap matrix CSV: row " + std::to_string(i) + " has " +
                       std::to_string(rows[i].size()) + " cells, expected " + std::to_string(n));
    }
    for (int j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace puzzlegen
