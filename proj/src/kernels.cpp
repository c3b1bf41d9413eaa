// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0

#include "puzzlegen/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace puzzlegen::kernels {
namespace {

Backend pick_default() {
  if (const char* env = std::getenv("PUZZLEGEN_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::kScalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return Backend::kAvx2;
    // "auto" or anything unrecognized falls through to detection.
  }
  return avx2_supported() ? Backend::kAvx2 : Backend::kScalar;
}

std::atomic<Backend>& backend_slot() {
  static std::atomic<Backend> slot{pick_default()};
  return slot;
}

}  // namespace

const KernelTable& active() {
  return backend_slot().load(std::memory_order_relaxed) == Backend::kAvx2 ? avx2_table()
                                                                          : scalar_table();
}

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  if (backend == Backend::kAvx2 && !avx2_supported()) backend = Backend::kScalar;
  backend_slot().store(backend, std::memory_order_relaxed);
}

}  // namespace puzzlegen::kernels
