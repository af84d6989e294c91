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

#include "bincue/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace bincue::fft {
namespace {

enum class Kind { kR2C, kC2R, kForward, kBackward };

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter>;

template <typename T>
FftwBuffer<T> Allocate(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(count, 1)));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}

// Plans outlive every caller; they are never destroyed.
fftw_plan GetPlan(Kind kind, std::size_t n) {
  static std::map<std::pair<Kind, std::size_t>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(PlannerMutex());
  const auto key = std::make_pair(kind, n);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_DESTROY_INPUT;
  fftw_plan plan = nullptr;
  switch (kind) {
    case Kind::kR2C: {
      auto in = Allocate<double>(n);
      auto out = Allocate<fftw_complex>(n / 2 + 1);
      plan = fftw_plan_dft_r2c_1d(len, in.get(), out.get(), flags);
      break;
    }
    case Kind::kC2R: {
      auto in = Allocate<fftw_complex>(n / 2 + 1);
      auto out = Allocate<double>(n);
      plan = fftw_plan_dft_c2r_1d(len, in.get(), out.get(), flags);
      break;
    }
    case Kind::kForward:
    case Kind::kBackward: {
      auto in = Allocate<fftw_complex>(n);
      auto out = Allocate<fftw_complex>(n);
      plan = fftw_plan_dft_1d(len, in.get(), out.get(),
                              kind == Kind::kForward ? FFTW_FORWARD : FFTW_BACKWARD,
                              flags);
      break;
    }
  }
  if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
  cache.emplace(key, plan);
  return plan;
}

}  // namespace

std::size_t next_fast_size(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t f : {2u, 3u, 5u}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return m;
  }
}

std::vector<std::complex<double>> rfft(std::span<const double> x,
                                       std::size_t n) {
  if (n == 0) throw std::invalid_argument("rfft: zero length");
  fftw_plan plan = GetPlan(Kind::kR2C, n);
  auto in = Allocate<double>(n);
  auto out = Allocate<fftw_complex>(n / 2 + 1);
  const std::size_t m = std::min(n, x.size());
  std::copy_n(x.begin(), m, in.get());
  std::fill(in.get() + m, in.get() + n, 0.0);
  fftw_execute_dft_r2c(plan, in.get(), out.get());
  std::vector<std::complex<double>> result(n / 2 + 1);
  for (std::size_t k = 0; k < result.size(); ++k) {
    result[k] = {out[k][0], out[k][1]};
  }
  return result;
}

std::vector<double> irfft(std::span<const std::complex<double>> spectrum,
                          std::size_t n) {
  if (spectrum.size() != n / 2 + 1) {
    throw std::invalid_argument("irfft: spectrum size does not match n");
  }
  fftw_plan plan = GetPlan(Kind::kC2R, n);
  auto in = Allocate<fftw_complex>(n / 2 + 1);
  auto out = Allocate<double>(n);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    in[k][0] = spectrum[k].real();
    in[k][1] = spectrum[k].imag();
  }
  fftw_execute_dft_c2r(plan, in.get(), out.get());
  std::vector<double> result(out.get(), out.get() + n);
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : result) v *= scale;
  return result;
}

std::vector<std::complex<double>> cfft(
    std::span<const std::complex<double>> x, std::size_t n, bool inverse) {
  if (n == 0) throw std::invalid_argument("cfft: zero length");
  fftw_plan plan = GetPlan(inverse ? Kind::kBackward : Kind::kForward, n);
  auto in = Allocate<fftw_complex>(n);
  auto out = Allocate<fftw_complex>(n);
  const std::size_t m = std::min(n, x.size());
  for (std::size_t k = 0; k < n; ++k) {
    in[k][0] = k < m ? x[k].real() : 0.0;
    in[k][1] = k < m ? x[k].imag() : 0.0;
  }
  fftw_execute_dft(plan, in.get(), out.get());
  std::vector<std::complex<double>> result(n);
  const double scale = inverse ? 1.0 / static_cast<double>(n) : 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    result[k] = {out[k][0] * scale, out[k][1] * scale};
  }
  return result;
}

std::vector<double> convolve(std::span<const double> x,
                             std::span<const double> h) {
  if (x.empty() || h.empty()) return {};
  const std::size_t len = x.size() + h.size() - 1;
  const std::size_t n = next_fast_size(len);
  auto xs = rfft(x, n);
  const auto hs = rfft(h, n);
  for (std::size_t k = 0; k < xs.size(); ++k) xs[k] *= hs[k];
  auto y = irfft(xs, n);
  y.resize(len);
  return y;
}

}  // namespace bincue::fft
