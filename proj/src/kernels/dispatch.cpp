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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "bincue/kernels.hpp"

namespace bincue::kernels {

#if !defined(BINCUE_HAVE_AVX2)
const KernelTable* avx2_table() { return nullptr; }
#endif
#if !defined(BINCUE_HAVE_NEON)
const KernelTable* neon_table() { return nullptr; }
#endif

namespace {

bool CpuHasAvx2() {
#if defined(BINCUE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa DetectIsa() {
  if (const char* env = std::getenv("BINCUE_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::kScalar;
    if (want == "avx2" && isa_available(Isa::kAvx2)) return Isa::kAvx2;
    if (want == "neon" && isa_available(Isa::kNeon)) return Isa::kNeon;
  }
  if (isa_available(Isa::kAvx2)) return Isa::kAvx2;
  if (isa_available(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

std::atomic<const KernelTable*>& Active() {
  static std::atomic<const KernelTable*> active{&table_for(DetectIsa())};
  return active;
}

const KernelTable& Current() { return *Active().load(std::memory_order_relaxed); }

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
      return avx2_table() != nullptr && CpuHasAvx2();
    case Isa::kNeon:
      return neon_table() != nullptr;
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("SIMD variant '" + std::string(isa_name(isa)) +
                                "' is not available on this CPU");
  }
  switch (isa) {
    case Isa::kAvx2:
      return *avx2_table();
    case Isa::kNeon:
      return *neon_table();
    case Isa::kScalar:
      break;
  }
  return scalar_table();
}

Isa active_isa() { return Current().isa; }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

void set_isa(Isa isa) { Active().store(&table_for(isa)); }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  return Current().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
  Current().axpy(alpha, x.data(), y.data(), x.size());
}

std::vector<double> convolve_direct(std::span<const double> x,
                                    std::span<const double> h) {
  if (x.empty() || h.empty()) return {};
  std::vector<double> y(x.size() + h.size() - 1, 0.0);
  Current().convolve(x.data(), x.size(), h.data(), h.size(), y.data());
  return y;
}

std::vector<double> gammatone_bank(std::span<const double> x,
                                   std::span<const GammatoneBand> bands) {
  std::vector<double> out(x.size() * bands.size(), 0.0);
  if (!x.empty() && !bands.empty()) {
    Current().gammatone_bank(x.data(), x.size(), bands.data(), bands.size(),
                             out.data());
  }
  return out;
}

}  // namespace bincue::kernels
