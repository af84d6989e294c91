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

// Compiled with -mavx2 -mfma -ffp-contract=off; only reached after the
// dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <cmath>

#include "bincue/kernels.hpp"
#include "kernels/gammatone_common.hpp"

namespace bincue::kernels {
namespace {

double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double DotAvx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8),
                           _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12),
                           _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = HorizontalSum(
      _mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void AxpyAvx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4,
                     _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4),
                                     _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void ConvolveAvx2(const double* x, std::size_t nx, const double* h,
                  std::size_t nh, double* y) {
  for (std::size_t k = 0; k < nh; ++k) AxpyAvx2(h[k], x, y + k, nx);
}

// Four bands per register, structure-of-arrays. Lane arithmetic mirrors
// GammatoneBandScalar exactly (separate mul and add, same order).
void GammatoneQuadAvx2(const double* x, std::size_t n,
                       const GammatoneBand* bands, double* out) {
  alignas(32) double omega[4], pole[4], gain[4], rot_r[4], rot_i[4];
  for (int l = 0; l < 4; ++l) {
    omega[l] = bands[l].omega;
    pole[l] = bands[l].pole;
    gain[l] = 1.0 - bands[l].pole;
    rot_r[l] = std::cos(bands[l].omega);
    rot_i[l] = -std::sin(bands[l].omega);
  }
  const __m256d p = _mm256_load_pd(pole);
  const __m256d g = _mm256_load_pd(gain);
  const __m256d rr = _mm256_load_pd(rot_r);
  const __m256d ri = _mm256_load_pd(rot_i);
  const __m256d two = _mm256_set1_pd(2.0);
  __m256d dr = _mm256_set1_pd(1.0), di = _mm256_setzero_pd();
  __m256d s1r = _mm256_setzero_pd(), s1i = s1r, s2r = s1r, s2i = s1r,
          s3r = s1r, s3i = s1r, s4r = s1r, s4i = s1r;
  alignas(32) double lane[4];
  for (std::size_t i = 0; i < n; ++i) {
    if (i % kPhasorResync == 0) {
      alignas(32) double c[4], s[4];
      for (int l = 0; l < 4; ++l) {
        const double phase = omega[l] * static_cast<double>(i);
        c[l] = std::cos(phase);
        s[l] = -std::sin(phase);
      }
      dr = _mm256_load_pd(c);
      di = _mm256_load_pd(s);
    }
    const __m256d xv = _mm256_set1_pd(x[i]);
    const __m256d zr = _mm256_mul_pd(xv, dr);
    const __m256d zi = _mm256_mul_pd(xv, di);
    s1r = _mm256_add_pd(_mm256_mul_pd(g, zr), _mm256_mul_pd(p, s1r));
    s1i = _mm256_add_pd(_mm256_mul_pd(g, zi), _mm256_mul_pd(p, s1i));
    s2r = _mm256_add_pd(_mm256_mul_pd(g, s1r), _mm256_mul_pd(p, s2r));
    s2i = _mm256_add_pd(_mm256_mul_pd(g, s1i), _mm256_mul_pd(p, s2i));
    s3r = _mm256_add_pd(_mm256_mul_pd(g, s2r), _mm256_mul_pd(p, s3r));
    s3i = _mm256_add_pd(_mm256_mul_pd(g, s2i), _mm256_mul_pd(p, s3i));
    s4r = _mm256_add_pd(_mm256_mul_pd(g, s3r), _mm256_mul_pd(p, s4r));
    s4i = _mm256_add_pd(_mm256_mul_pd(g, s3i), _mm256_mul_pd(p, s4i));
    const __m256d y = _mm256_mul_pd(
        two, _mm256_add_pd(_mm256_mul_pd(s4r, dr), _mm256_mul_pd(s4i, di)));
    _mm256_store_pd(lane, y);
    out[i] = lane[0];
    out[n + i] = lane[1];
    out[2 * n + i] = lane[2];
    out[3 * n + i] = lane[3];
    const __m256d nr = _mm256_sub_pd(_mm256_mul_pd(dr, rr), _mm256_mul_pd(di, ri));
    const __m256d ni = _mm256_add_pd(_mm256_mul_pd(dr, ri), _mm256_mul_pd(di, rr));
    dr = nr;
    di = ni;
  }
}

void GammatoneBankAvx2(const double* x, std::size_t n,
                       const GammatoneBand* bands, std::size_t n_bands,
                       double* out) {
  std::size_t b = 0;
  for (; b + 4 <= n_bands; b += 4) {
    GammatoneQuadAvx2(x, n, bands + b, out + b * n);
  }
  for (; b < n_bands; ++b) GammatoneBandScalar(x, n, bands[b], out + b * n);
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{Isa::kAvx2, DotAvx2, AxpyAvx2, ConvolveAvx2,
                                 GammatoneBankAvx2};
  return &table;
}

}  // namespace bincue::kernels
