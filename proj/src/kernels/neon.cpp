// Copyright 2026 The bincue Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AArch64 Advanced SIMD variants. NEON is mandatory on AArch64, so the
// dispatcher selects this table whenever it is compiled in.

#include <arm_neon.h>

#include <cmath>

#include "bincue/kernels.hpp"
#include "kernels/gammatone_common.hpp"

namespace bincue::kernels {
namespace {

double DotNeon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  float64x2_t acc2 = vdupq_n_f64(0.0);
  float64x2_t acc3 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc2 = vfmaq_f64(acc2, vld1q_f64(a + i + 4), vld1q_f64(b + i + 4));
    acc3 = vfmaq_f64(acc3, vld1q_f64(a + i + 6), vld1q_f64(b + i + 6));
  }
  for (; i + 2 <= n; i += 2) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double acc =
      vaddvq_f64(vaddq_f64(vaddq_f64(acc0, acc1), vaddq_f64(acc2, acc3)));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void AxpyNeon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    vst1q_f64(y + i + 2,
              vfmaq_f64(vld1q_f64(y + i + 2), va, vld1q_f64(x + i + 2)));
  }
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void ConvolveNeon(const double* x, std::size_t nx, const double* h,
                  std::size_t nh, double* y) {
  for (std::size_t k = 0; k < nh; ++k) AxpyNeon(h[k], x, y + k, nx);
}

// Two bands per register; same lane arithmetic as GammatoneBandScalar.
void GammatonePairNeon(const double* x, std::size_t n,
                       const GammatoneBand* bands, double* out) {
  double omega[2], pole[2], gain[2], rot_r[2], rot_i[2];
  for (int l = 0; l < 2; ++l) {
    omega[l] = bands[l].omega;
    pole[l] = bands[l].pole;
    gain[l] = 1.0 - bands[l].pole;
    rot_r[l] = std::cos(bands[l].omega);
    rot_i[l] = -std::sin(bands[l].omega);
  }
  const float64x2_t p = vld1q_f64(pole);
  const float64x2_t g = vld1q_f64(gain);
  const float64x2_t rr = vld1q_f64(rot_r);
  const float64x2_t ri = vld1q_f64(rot_i);
  const float64x2_t two = vdupq_n_f64(2.0);
  float64x2_t dr = vdupq_n_f64(1.0), di = vdupq_n_f64(0.0);
  float64x2_t s1r = vdupq_n_f64(0.0), s1i = s1r, s2r = s1r, s2i = s1r,
              s3r = s1r, s3i = s1r, s4r = s1r, s4i = s1r;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % kPhasorResync == 0) {
      double c[2], s[2];
      for (int l = 0; l < 2; ++l) {
        const double phase = omega[l] * static_cast<double>(i);
        c[l] = std::cos(phase);
        s[l] = -std::sin(phase);
      }
      dr = vld1q_f64(c);
      di = vld1q_f64(s);
    }
    const float64x2_t xv = vdupq_n_f64(x[i]);
    const float64x2_t zr = vmulq_f64(xv, dr);
    const float64x2_t zi = vmulq_f64(xv, di);
    s1r = vaddq_f64(vmulq_f64(g, zr), vmulq_f64(p, s1r));
    s1i = vaddq_f64(vmulq_f64(g, zi), vmulq_f64(p, s1i));
    s2r = vaddq_f64(vmulq_f64(g, s1r), vmulq_f64(p, s2r));
    s2i = vaddq_f64(vmulq_f64(g, s1i), vmulq_f64(p, s2i));
    s3r = vaddq_f64(vmulq_f64(g, s2r), vmulq_f64(p, s3r));
    s3i = vaddq_f64(vmulq_f64(g, s2i), vmulq_f64(p, s3i));
    s4r = vaddq_f64(vmulq_f64(g, s3r), vmulq_f64(p, s4r));
    s4i = vaddq_f64(vmulq_f64(g, s3i), vmulq_f64(p, s4i));
    const float64x2_t y =
        vmulq_f64(two, vaddq_f64(vmulq_f64(s4r, dr), vmulq_f64(s4i, di)));
    out[i] = vgetq_lane_f64(y, 0);
    out[n + i] = vgetq_lane_f64(y, 1);
    const float64x2_t nr = vsubq_f64(vmulq_f64(dr, rr), vmulq_f64(di, ri));
    const float64x2_t ni = vaddq_f64(vmulq_f64(dr, ri), vmulq_f64(di, rr));
    dr = nr;
    di = ni;
  }
}

void GammatoneBankNeon(const double* x, std::size_t n,
                       const GammatoneBand* bands, std::size_t n_bands,
                       double* out) {
  std::size_t b = 0;
  for (; b + 2 <= n_bands; b += 2) {
    GammatonePairNeon(x, n, bands + b, out + b * n);
  }
  for (; b < n_bands; ++b) GammatoneBandScalar(x, n, bands[b], out + b * n);
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable table{Isa::kNeon, DotNeon, AxpyNeon, ConvolveNeon,
                                 GammatoneBankNeon};
  return &table;
}

}  // namespace bincue::kernels
