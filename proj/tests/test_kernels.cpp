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


#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <random>

#include "bincue/error.hpp"
#include "bincue/fft.hpp"
#include "bincue/kernels.hpp"
#include "bincue/random.hpp"
#include "bincue/wav.hpp"

using namespace bincue;
namespace k = bincue::kernels;

namespace {

std::vector<double> randn(std::size_t n, std::uint64_t seed) {
  Rng r(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (double& x : v) x = g(r);
  return v;
}

std::vector<const k::KernelTable*> simd_tables() {
  std::vector<const k::KernelTable*> out;
  if (k::isa_available(k::Isa::kAvx2)) out.push_back(k::avx2_table());
  if (k::isa_available(k::Isa::kNeon)) out.push_back(k::neon_table());
  return out;
}

std::vector<double> naive_convolve(const std::vector<double>& x,
                                   const std::vector<double>& h) {
  std::vector<double> y(x.size() + h.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) y[i + j] += x[i] * h[j];
  return y;
}

}  // namespace

TEST_CASE("scalar kernels against naive loops") {
  const auto& s = k::scalar_table();
  const auto a = randn(1001, 1), b = randn(1001, 2);
  double ref = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ref += a[i] * b[i];
  CHECK(s.dot(a.data(), b.data(), a.size()) == doctest::Approx(ref).epsilon(1e-12));

  auto y = b;
  s.axpy(0.5, a.data(), y.data(), y.size());
  for (std::size_t i = 0; i < y.size(); ++i) REQUIRE(y[i] == b[i] + 0.5 * a[i]);

  const auto x = randn(300, 3), h = randn(37, 4);
  std::vector<double> out(x.size() + h.size() - 1, 0.0);
  s.convolve(x.data(), x.size(), h.data(), h.size(), out.data());
  const auto want = naive_convolve(x, h);
  for (std::size_t i = 0; i < out.size(); ++i)
    REQUIRE(out[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("gammatone band has unit gain at its centre") {
  const int rate = 48000;
  const double fc = 2000, b = 1.019 * 24.7 * (4.37 * fc / 1000 + 1);
  const k::GammatoneBand band{2 * std::numbers::pi * fc / rate,
                              std::exp(-2 * std::numbers::pi * b / rate)};
  std::vector<double> x(rate / 2);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::cos(2 * std::numbers::pi * fc * i / rate);
  std::vector<double> y(x.size());
  k::scalar_table().gammatone_bank(x.data(), x.size(), &band, 1, y.data());
  // Steady state; what remains is the image at twice the centre frequency,
  // attenuated by the four low-pass stages.
  for (std::size_t i = x.size() / 2; i < x.size(); ++i)
    REQUIRE(std::abs(y[i] - x[i]) < 1e-4);
}

TEST_CASE("SIMD kernels match the scalar reference") {
  const auto tables = simd_tables();
  if (tables.empty()) {
    MESSAGE("no SIMD variant on this CPU");
    return;
  }
  const auto& s = k::scalar_table();
  for (const auto* t : tables) {
    CAPTURE(k::isa_name(t->isa));
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 33u, 1000u, 4099u}) {
      const auto a = randn(n, 10 + n), b = randn(n, 20 + n);
      const double r = s.dot(a.data(), b.data(), n);
      const double v = t->dot(a.data(), b.data(), n);
      double mag = 0;
      for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
      REQUIRE(std::abs(r - v) <= 1e-13 * (mag + 1));

      auto y1 = b, y2 = b;
      s.axpy(-1.75, a.data(), y1.data(), n);
      t->axpy(-1.75, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i)
        REQUIRE(std::abs(y1[i] - y2[i]) <=
                1e-15 * (std::abs(b[i]) + std::abs(1.75 * a[i])));
    }
    for (std::size_t nh : {1u, 2u, 5u, 32u, 129u}) {
      const auto x = randn(777, 30 + nh), h = randn(nh, 40 + nh);
      std::vector<double> o1(x.size() + nh - 1, 0.0), o2 = o1;
      s.convolve(x.data(), x.size(), h.data(), nh, o1.data());
      t->convolve(x.data(), x.size(), h.data(), nh, o2.data());
      for (std::size_t i = 0; i < o1.size(); ++i)
        REQUIRE(o1[i] == doctest::Approx(o2[i]).epsilon(1e-12));
    }
    std::vector<k::GammatoneBand> bands;
    for (int i = 0; i < 7; ++i)
      bands.push_back({0.05 + 0.3 * i, 0.9 + 0.01 * i});
    const auto x = randn(2001, 99);
    std::vector<double> g1(bands.size() * x.size()), g2(g1.size());
    s.gammatone_bank(x.data(), x.size(), bands.data(), bands.size(), g1.data());
    t->gammatone_bank(x.data(), x.size(), bands.data(), bands.size(), g2.data());
    CHECK(g1 == g2);
  }
}

TEST_CASE("dispatch") {
  const auto before = k::active_isa();
  k::set_isa(k::Isa::kScalar);
  CHECK(k::active_isa() == k::Isa::kScalar);
  const auto a = randn(100, 5), b = randn(100, 6);
  CHECK(k::dot(a, b) == k::scalar_table().dot(a.data(), b.data(), 100));
  if (!k::isa_available(k::Isa::kNeon))
    CHECK_THROWS_AS(k::set_isa(k::Isa::kNeon), std::invalid_argument);
  k::set_isa(before);
  CHECK(k::isa_name(k::Isa::kAvx2) == "avx2");
}

TEST_CASE("FFT round trip and convolution") {
  CHECK(fft::next_fast_size(1) == 1);
  CHECK(fft::next_fast_size(7) == 8);
  CHECK(fft::next_fast_size(97) == 100);
  CHECK(fft::next_fast_size(1025) == 1080);

  const auto x = randn(500, 8);
  const auto spec = fft::rfft(x, 600);
  CHECK(spec.size() == 301);
  const auto back = fft::irfft(spec, 600);
  for (std::size_t i = 0; i < 600; ++i)
    REQUIRE(std::abs(back[i] - (i < 500 ? x[i] : 0.0)) < 1e-12);

  std::vector<std::complex<double>> z(64);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = {x[i], x[i + 64]};
  const auto zz = fft::cfft(fft::cfft(z, 64, false), 64, true);
  for (std::size_t i = 0; i < 64; ++i) REQUIRE(std::abs(zz[i] - z[i]) < 1e-12);

  const auto h = randn(300, 9);
  const auto y = fft::convolve(x, h), want = naive_convolve(x, h);
  REQUIRE(y.size() == want.size());
  for (std::size_t i = 0; i < y.size(); ++i) REQUIRE(std::abs(y[i] - want[i]) < 1e-10);
}

TEST_CASE("WAV round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "bincue_wav_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "t.wav";
  std::vector<double> l(1000), r(1000);
  for (std::size_t i = 0; i < l.size(); ++i) {
    l[i] = std::sin(0.01 * i) * 0.9;
    r[i] = -l[i];
  }
  wav::write_pcm16(path, 44100, {l, r});
  const auto a = wav::read(path);
  CHECK(a.sample_rate_hz == 44100);
  REQUIRE(a.channels.size() == 2);
  for (std::size_t i = 0; i < l.size(); ++i) {
    // Written as round(v * 32767), read back as q / 32768.
    REQUIRE(std::abs(a.channels[0][i] - l[i]) <= 1.5 / 32768);
    REQUIRE(std::abs(a.channels[1][i] - r[i]) <= 1.5 / 32768);
  }
  const auto st = wav::read_stereo(path);
  CHECK(st.size() == 1000);
  CHECK_THROWS_AS(wav::read_mono(path), InputError);
  CHECK_THROWS_AS(wav::read(dir / "missing.wav"), InputError);
  std::filesystem::remove_all(dir);
}
