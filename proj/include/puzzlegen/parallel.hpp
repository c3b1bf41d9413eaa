// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace puzzlegen {

/// Worker cap: PUZZLEGEN_THREADS when set (>= 1), else hardware concurrency.
int max_threads();

/// Runs fn(i) for i in [0, n) on up to max_threads() workers. Work items must
/// not share mutable state; results are index-addressed so scheduling cannot
/// change any output.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace puzzlegen
