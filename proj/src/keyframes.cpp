// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0

#include "puzzlegen/keyframes.hpp"

#include <algorithm>
#include <sstream>

namespace puzzlegen {

std::vector<int> validity_filter(const OverlapMatrix& o, double eta) {
  std::vector<int> kept;
  for (int i = 0; i < o.n; ++i) {
    double max_overlap = 0.0;
    for (int j = 0; j < o.n; ++j) {
      if (j != i) max_overlap = std::max(max_overlap, o.at(i, j));
    }
    if (max_overlap > eta) kept.push_back(i);
  }
  return kept;
}

std::optional<int> longest_cover_seed(const OverlapMatrix& o, std::span<const int> valid,
                                      double tau) {
  std::optional<int> seed;
  int best_count = -1;
  for (int i : valid) {
    int count = 0;
    for (int j : valid) {
      if (j != i && o.at(i, j) >= tau) ++count;
    }
    if (count > best_count) {
      best_count = count;
      seed = i;
    }
  }
  return seed;
}

std::vector<int> prune_redundancy(const OverlapMatrix& o, std::span<const int> candidates,
                                  double rho) {
  std::vector<int> kept;
  for (int j : candidates) {
    bool redundant = false;
    for (int k : kept) {
      if (std::max(o.at(j, k), o.at(k, j)) >= rho) {
        redundant = true;
        break;
      }
    }
    if (!redundant) kept.push_back(j);
  }
  return kept;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace

std::vector<int> select_keyframes(const OverlapMatrix& o, const KeyframeThresholds& thresholds,
                                  SelectionTrace* trace) {
  const std::vector<int> valid = validity_filter(o, thresholds.eta);
  if (trace) {
    for (int i = 0; i < o.n; ++i) {
      double max_overlap = 0.0;
      for (int j = 0; j < o.n; ++j)
        if (j != i) max_overlap = std::max(max_overlap, o.at(i, j));
      const bool kept = std::find(valid.begin(), valid.end(), i) != valid.end();
      trace->entries.push_back({i, "validity", kept,
                                "max overlap " + fmt(max_overlap) + (kept ? " > " : " <= ") +
                                    fmt(thresholds.eta)});
    }
  }
  if (valid.empty()) return {};

  const std::optional<int> seed = longest_cover_seed(o, valid, thresholds.tau);
  std::vector<int> cover;
  for (int j : valid) {
    if (j == *seed || o.at(*seed, j) >= thresholds.tau) cover.push_back(j);
  }
  std::sort(cover.begin(), cover.end());
  if (trace) {
    for (int j : valid) {
      const bool in_cover = std::find(cover.begin(), cover.end(), j) != cover.end();
      std::string reason = j == *seed ? "seed" : "overlap with seed " + fmt(o.at(*seed, j));
      trace->entries.push_back({j, "cover", in_cover, reason});
    }
  }

  const std::vector<int> kept = prune_redundancy(o, cover, thresholds.rho);
  if (trace) {
    for (int j : cover) {
      const bool is_kept = std::find(kept.begin(), kept.end(), j) != kept.end();
      std::string reason = is_kept ? "not redundant with earlier kept frames"
                                   : "bidirectional overlap >= " + fmt(thresholds.rho) +
                                         " with an earlier kept frame";
      trace->entries.push_back({j, "prune", is_kept, reason});
    }
  }
  return kept;
}

}  // namespace puzzlegen
