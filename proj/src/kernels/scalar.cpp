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

#include <cmath>

#include "bincue/kernels.hpp"
#include "kernels/gammatone_common.hpp"

namespace bincue::kernels {
namespace {

double DotScalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void AxpyScalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void ConvolveScalar(const double* x, std::size_t nx, const double* h,
                    std::size_t nh, double* y) {
  for (std::size_t k = 0; k < nh; ++k) AxpyScalar(h[k], x, y + k, nx);
}

void GammatoneBankScalar(const double* x, std::size_t n,
                         const GammatoneBand* bands, std::size_t n_bands,
                         double* out) {
  for (std::size_t b = 0; b < n_bands; ++b) {
    GammatoneBandScalar(x, n, bands[b], out + b * n);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::kScalar, DotScalar, AxpyScalar,
                                 ConvolveScalar, GammatoneBankScalar};
  return table;
}

}  // namespace bincue::kernels
