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

// Shared scalar gammatone recursion. Every SIMD variant reproduces this
// exact operation order lane by lane, and falls back to it for the
// remainder bands, so outputs are bit-identical across variants.

#pragma once

#include <cmath>
#include <cstddef>

#include "bincue/kernels.hpp"

namespace bincue::kernels {

// The demodulation phasor is advanced by complex rotation and re-seeded from
// cos/sin every kPhasorResync samples to bound drift.
inline constexpr std::size_t kPhasorResync = 1024;

inline void GammatoneBandScalar(const double* x, std::size_t n,
                                const GammatoneBand& band, double* out) {
  const double p = band.pole;
  const double g = 1.0 - p;
  const double rot_r = std::cos(band.omega);
  const double rot_i = -std::sin(band.omega);
  double dr = 1.0, di = 0.0;
  double s1r = 0, s1i = 0, s2r = 0, s2i = 0, s3r = 0, s3i = 0, s4r = 0,
         s4i = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % kPhasorResync == 0) {
      const double phase = band.omega * static_cast<double>(i);
      dr = std::cos(phase);
      di = -std::sin(phase);
    }
    const double zr = x[i] * dr;
    const double zi = x[i] * di;
    s1r = g * zr + p * s1r;
    s1i = g * zi + p * s1i;
    s2r = g * s1r + p * s2r;
    s2i = g * s1i + p * s2i;
    s3r = g * s2r + p * s3r;
    s3i = g * s2i + p * s3i;
    s4r = g * s3r + p * s4r;
    s4i = g * s3i + p * s4i;
    out[i] = 2.0 * (s4r * dr + s4i * di);
    const double nr = dr * rot_r - di * rot_i;
    const double ni = dr * rot_i + di * rot_r;
    dr = nr;
    di = ni;
  }
}

}  // namespace bincue::kernels
