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

// Data-parallel inner loops with a scalar reference implementation and
// SIMD variants (AVX2 on x86-64, NEON on AArch64). The variant is picked
// once at startup from the CPU feature bits and can be overridden with the
// BINCUE_SIMD environment variable (scalar, avx2, neon) or set_isa().
//
// The scalar table is the reference: every SIMD entry point is tested
// against it. gammatone_bank is bit-identical across variants (no FMA, same
// operation order); dot differs by summation order, axpy and convolve by
// fused multiply-add rounding.

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace bincue::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

// One band of a complex-baseband 4th-order gammatone filter. The input is
// demodulated by exp(-j*omega*n), smoothed by four cascaded real one-pole
// low-passes with pole `pole` and gain `1 - pole`, and remodulated. Output
// gain at the centre frequency is exactly 1.
struct GammatoneBand {
  double omega = 0.0;  // centre frequency, radians per sample
  double pole = 0.0;   // exp(-2*pi*b/fs)
};

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y[0 .. nx+nh-1) = x (*) h; y must be zeroed by the caller.
  void (*convolve)(const double* x, std::size_t nx, const double* h,
                   std::size_t nh, double* y);
  // out is bands x n, row-major.
  void (*gammatone_bank)(const double* x, std::size_t n,
                         const GammatoneBand* bands, std::size_t n_bands,
                         double* out);
};

const KernelTable& scalar_table();
// nullptr when the variant is not compiled in.
const KernelTable* avx2_table();
const KernelTable* neon_table();

bool isa_available(Isa isa);
Isa active_isa();
std::string_view isa_name(Isa isa);
// Throws std::invalid_argument if the variant is unavailable on this CPU.
void set_isa(Isa isa);
const KernelTable& table_for(Isa isa);

// Dispatched entry points.
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
std::vector<double> convolve_direct(std::span<const double> x,
                                    std::span<const double> h);
std::vector<double> gammatone_bank(std::span<const double> x,
                                   std::span<const GammatoneBand> bands);

}  // namespace bincue::kernels
