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

#ifndef FAIRCHAIN_PARALLEL_HPP_
#define FAIRCHAIN_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace fairchain {

// Worker count: FAIRCHAIN_THREADS if set (clamped to [1,256]), otherwise
// hardware concurrency.
std::size_t thread_count();

// Runs fn(i) for i in [0, n). Each item must write only its own output
// slot; items may not depend on each other. Outputs are identical for
// any worker count because all randomness is index-derived.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fairchain

#endif  // FAIRCHAIN_PARALLEL_HPP_
