// Copyright 2026 The Fairchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairchain/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace fairchain::kernels {
namespace {

const Ops& select() {
  const char* env = std::getenv("FAIRCHAIN_SIMD");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return scalar_ops();
#if defined(__x86_64__) || defined(_M_X64)
    if (std::strcmp(env, "avx2") == 0 && avx2_available()) return avx2_ops();
#endif
#if defined(__aarch64__)
    if (std::strcmp(env, "neon") == 0) return neon_ops();
#endif
    // unknown or unavailable request falls through to auto selection
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2_available()) return avx2_ops();
#endif
#if defined(__aarch64__)
  return neon_ops();
#else
  return scalar_ops();
#endif
}

}  // namespace

const Ops& active_ops() {
  static const Ops& ops = select();
  return ops;
}

}  // namespace fairchain::kernels
