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
//
// Micro-benchmark of the kernel variants: bench_kernels [n] [reps]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "fairchain/kernels.hpp"
#include "fairchain/rng.hpp"

using namespace fairchain;
using Clock = std::chrono::steady_clock;

namespace {

double checksum = 0.0;  // keeps the optimizer honest

template <typename F>
double time_ns_per_element(std::size_t n, int reps, F&& body) {
  body();  // warm up
  auto start = Clock::now();
  for (int r = 0; r < reps; ++r) body();
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  return secs / reps / static_cast<double>(n) * 1e9;
}

void bench(const kernels::Ops& ops, std::size_t n, int reps) {
  Rng rng(7);
  std::vector<double> a(n), b(n), w(n), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.uniform(-1, 1);
    b[i] = rng.uniform(-1, 1);
    w[i] = rng.uniform01();
  }
  std::printf("%-8s", ops.name);
  std::printf(" sum %6.3f", time_ns_per_element(n, reps, [&] {
                checksum += ops.sum(a.data(), n);
              }));
  std::printf(" dot %6.3f", time_ns_per_element(n, reps, [&] {
                checksum += ops.dot(a.data(), b.data(), n);
              }));
  std::printf(" wdot %6.3f", time_ns_per_element(n, reps, [&] {
                checksum += ops.wdot(w.data(), a.data(), b.data(), n);
              }));
  std::printf(" axpy %6.3f", time_ns_per_element(n, reps, [&] {
                ops.axpy(1e-9, a.data(), out.data(), n);
              }));
  std::printf(" sub %6.3f", time_ns_per_element(n, reps, [&] {
                ops.sub(a.data(), b.data(), out.data(), n);
              }));
  double lo, hi;
  std::printf(" minmax %6.3f", time_ns_per_element(n, reps, [&] {
                ops.minmax(a.data(), n, &lo, &hi);
                checksum += lo + hi;
              }));
  std::printf("  (ns/element)\n");
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 100000;
  int reps = argc > 2 ? std::atoi(argv[2]) : 200;
  std::printf("n=%zu reps=%d active=%s\n", n, reps,
              kernels::active_ops().name);
  bench(kernels::scalar_ops(), n, reps);
#if defined(__x86_64__) || defined(_M_X64)
  if (kernels::avx2_available()) bench(kernels::avx2_ops(), n, reps);
#endif
#if defined(__aarch64__)
  bench(kernels::neon_ops(), n, reps);
#endif
  if (checksum == 42.0) std::printf("~\n");
  return 0;
}
