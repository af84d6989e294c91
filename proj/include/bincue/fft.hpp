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

// Thin FFTW wrapper. Plans are created with FFTW_ESTIMATE (deterministic
// algorithm choice) and cached per size; planning is serialized, execution
// is safe from any thread.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace bincue::fft {

// Smallest n' >= n whose only prime factors are 2, 3 and 5.
std::size_t next_fast_size(std::size_t n);

// Real forward transform of x zero-padded to n; returns n/2+1 bins.
std::vector<std::complex<double>> rfft(std::span<const double> x,
                                       std::size_t n);

// Inverse of rfft, scaled by 1/n.
std::vector<double> irfft(std::span<const std::complex<double>> spectrum,
                          std::size_t n);

// Complex transform of length n (input zero-padded). Inverse is scaled by 1/n.
std::vector<std::complex<double>> cfft(
    std::span<const std::complex<double>> x, std::size_t n, bool inverse);

// Linear convolution via overlap-free FFT product.
std::vector<double> convolve(std::span<const double> x,
                             std::span<const double> h);

}  // namespace bincue::fft
