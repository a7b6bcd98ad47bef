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

#ifndef FAIRCHAIN_KERNELS_HPP_
#define FAIRCHAIN_KERNELS_HPP_

#include <cstddef>
#include <span>

namespace fairchain::kernels {

// Double-precision array kernels used by the model-fitting inner loops
// (IRLS cross products, linear predictors, residuals, score averaging).
//
// Every kernel exists as a scalar reference implementation plus SIMD
// variants (AVX2 on x86-64, NEON on aarch64). The active variant is
// chosen once at runtime from CPU capabilities; FAIRCHAIN_SIMD=scalar
// (or =avx2 / =neon) overrides the choice. SIMD results may differ from
// the scalar reference in the last bits of a reduction; the equivalence
// tests bound that difference.
struct Ops {
  const char* name;

  // sum of a[0..n)
  double (*sum)(const double* a, std::size_t n);
  // dot product of a and b
  double (*dot)(const double* a, const double* b, std::size_t n);
  // weighted triple product: sum_i w[i]*a[i]*b[i]
  double (*wdot)(const double* w, const double* a, const double* b,
                 std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = a[i] - b[i]
  void (*sub)(const double* a, const double* b, double* out, std::size_t n);
  // min and max of a[0..n); n must be >= 1
  void (*minmax)(const double* a, std::size_t n, double* lo, double* hi);
};

const Ops& scalar_ops();
const Ops& active_ops();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_available();
const Ops& avx2_ops();
#endif
#if defined(__aarch64__)
const Ops& neon_ops();
#endif

inline double sum(std::span<const double> a) {
  return active_ops().sum(a.data(), a.size());
}
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active_ops().dot(a.data(), b.data(), a.size());
}
inline double wdot(std::span<const double> w, std::span<const double> a,
                   std::span<const double> b) {
  return active_ops().wdot(w.data(), a.data(), b.data(), w.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active_ops().axpy(alpha, x.data(), y.data(), x.size());
}
inline void sub(std::span<const double> a, std::span<const double> b,
                std::span<double> out) {
  active_ops().sub(a.data(), b.data(), out.data(), a.size());
}
inline void minmax(std::span<const double> a, double* lo, double* hi) {
  active_ops().minmax(a.data(), a.size(), lo, hi);
}

}  // namespace fairchain::kernels

#endif  // FAIRCHAIN_KERNELS_HPP_
