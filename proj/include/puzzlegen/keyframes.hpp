// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "puzzlegen/covisibility.hpp"

namespace puzzlegen {

struct KeyframeThresholds {
  double eta = 0.1;  // validity cut-off
  double tau = 0.2;  // minimum visibility for cover counting
  double rho = 0.7;  // redundancy bound
};

/// Step i: frames whose maximum overlap with any other frame strictly exceeds
/// eta. Ascending indices.
std::vector<int> validity_filter(const OverlapMatrix& o, double eta);

/// Step ii: the valid frame with the most tau-neighbors among valid frames
/// (self excluded); ties break on the lowest index. nullopt when `valid` is
/// empty.
std::optional<int> longest_cover_seed(const OverlapMatrix& o, std::span<const int> valid,
                                      double tau);

/// Step iii: greedy sequential filter over the ordered candidates; keeps a
/// frame iff its bidirectional overlap with every earlier kept frame stays
/// below rho.
std::vector<int> prune_redundancy(const OverlapMatrix& o, std::span<const int> candidates,
                                  double rho);

struct SelectionTrace {
  struct Entry {
    int frame = -1;
    std::string stage;  // "validity" | "cover" | "prune"
    bool kept = false;
    std::string reason;
  };
  std::vector<Entry> entries;
};

/// Full three-step selection. The seed's cover set (seed plus its
/// tau-neighbors among valid frames, ascending) feeds pruning. Empty result
/// means no frame survived validity filtering; callers fall back to uniform
/// sampling.
std::vector<int> select_keyframes(const OverlapMatrix& o, const KeyframeThresholds& thresholds,
                                  SelectionTrace* trace = nullptr);

}  // namespace puzzlegen
