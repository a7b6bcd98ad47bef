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

#if defined(__aarch64__)

#include <arm_neon.h>

namespace fairchain::kernels {
namespace {

double sum_neon(const double* a, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(a + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(a + i + 2));
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) acc += a[i];
  return acc;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double wdot_neon(const double* w, const double* a, const double* b,
                 std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t wa0 = vmulq_f64(vld1q_f64(w + i), vld1q_f64(a + i));
    float64x2_t wa1 = vmulq_f64(vld1q_f64(w + i + 2), vld1q_f64(a + i + 2));
    acc0 = vfmaq_f64(acc0, wa0, vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, wa1, vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) acc += w[i] * a[i] * b[i];
  return acc;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t vy = vld1q_f64(y + i);
    vy = vfmaq_f64(vy, va, vld1q_f64(x + i));
    vst1q_f64(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void sub_neon(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void minmax_neon(const double* a, std::size_t n, double* lo, double* hi) {
  if (n < 4) {
    double mn = a[0], mx = a[0];
    for (std::size_t i = 1; i < n; ++i) {
      if (a[i] < mn) mn = a[i];
      if (a[i] > mx) mx = a[i];
    }
    *lo = mn;
    *hi = mx;
    return;
  }
  float64x2_t vmn = vld1q_f64(a);
  float64x2_t vmx = vmn;
  std::size_t i = 2;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vld1q_f64(a + i);
    vmn = vminq_f64(vmn, v);
    vmx = vmaxq_f64(vmx, v);
  }
  if (i < n) {
    float64x2_t v = vld1q_f64(a + n - 2);
    vmn = vminq_f64(vmn, v);
    vmx = vmaxq_f64(vmx, v);
  }
  *lo = vminvq_f64(vmn);
  *hi = vmaxvq_f64(vmx);
}

}  // namespace

const Ops& neon_ops() {
  static const Ops ops = {"neon",     sum_neon, dot_neon, wdot_neon,
                          axpy_neon, sub_neon, minmax_neon};
  return ops;
}

}  // namespace fairchain::kernels

#endif  // aarch64
