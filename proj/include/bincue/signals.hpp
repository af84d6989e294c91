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

// Sampled-signal primitives: generators, zero-phase IIR filters,
// octave and ERB filterbanks, analytic envelope, normalized
// cross-correlation and Savitzky-Golay smoothing. All processing is in
// double precision.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bincue/random.hpp"

namespace bincue {

inline constexpr int kDefaultSampleRate = 48000;

struct SampledSignal {
  int sample_rate_hz = kDefaultSampleRate;
  std::vector<double> samples;

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
  double nyquist_hz() const { return 0.5 * sample_rate_hz; }
  // Throws InputError on a non-positive rate or a non-finite sample.
  void validate() const;
};

struct BinauralPair {
  SampledSignal left;
  SampledSignal right;

  // Equal rates and lengths, finite samples.
  void validate() const;
  std::size_t size() const { return left.size(); }
  int sample_rate_hz() const { return left.sample_rate_hz; }
};

std::size_t samples_for(double duration_s, int rate);
double energy(std::span<const double> x);

// ---------------------------------------------------------------- generators

// 1/f noise from Gaussian white noise through a fixed pole/zero network
// (accurate to well under a dB from ~10 Hz to Nyquist), peak-normalized.
SampledSignal pink_noise(double duration_s, int rate, Rng& rng);
// Gaussian white noise, peak-normalized.
SampledSignal white_noise(double duration_s, int rate, Rng& rng);
inline SampledSignal white_burst(Rng& rng, int rate = kDefaultSampleRate,
                                 double duration_s = 0.1) {
  return white_noise(duration_s, rate, rng);
}
// Unit-amplitude sine with 5 ms raised-cosine on/off ramps.
SampledSignal tone(double freq_hz, double duration_s, int rate);

struct Stimulus {
  SampledSignal signal;
  // Start times of core, second pink segment and tone.
  std::vector<double> boundaries_s;
};

// pink(0.2 s) + core(1.0 s) + pink(0.2 s) + 1 kHz tone(0.2 s). The core must
// be within one sample of 1.0 s at `rate`; it is trimmed or zero-extended to
// exactly one second.
Stimulus build_stimulus(const SampledSignal& core, int rate, Rng& rng);

// ---------------------------------------------------------------- filters

struct Biquad {
  double b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;
};
using SosFilter = std::vector<Biquad>;

// 4th-order Butterworth sections (bilinear transform, pre-warped).
SosFilter butterworth_lowpass(double cutoff_hz, int rate);
SosFilter butterworth_highpass(double cutoff_hz, int rate);
// |H(f)| for a single forward pass.
double magnitude_response(const SosFilter& sos, double freq_hz, int rate);

// How the forward-backward filter treats the signal ends. kSteadyState
// extends the signal by odd reflection and starts each pass from the
// step-response steady state (constant inputs pass unchanged); kZero
// assumes silence outside the signal, which suits impulse responses.
enum class FilterEdge { kSteadyState, kZero };

std::vector<double> filtfilt(const SosFilter& sos, std::span<const double> x,
                             FilterEdge edge = FilterEdge::kSteadyState);

// Zero-phase 4th-order Butterworth characteristic (-3 dB per pass at the
// cutoff). Throws InputError unless 0 < cutoff < Nyquist.
SampledSignal lowpass(const SampledSignal& s, double cutoff_hz,
                      FilterEdge edge = FilterEdge::kSteadyState);
SampledSignal highpass(const SampledSignal& s, double cutoff_hz,
                       FilterEdge edge = FilterEdge::kSteadyState);
// High-pass at lo followed by low-pass at hi; the low-pass is skipped when
// hi reaches Nyquist.
SampledSignal bandpass(const SampledSignal& s, double lo_hz, double hi_hz,
                       FilterEdge edge = FilterEdge::kSteadyState);

// One octave-wide band per centre (edges centre/sqrt2 .. centre*sqrt2).
std::vector<SampledSignal> octave_filterbank(
    const SampledSignal& s, std::span<const double> centers_hz,
    FilterEdge edge = FilterEdge::kSteadyState);
SosFilter octave_band_filter(double center_hz, int rate);

// ERB-number scale, Glasberg & Moore.
double erb_number(double freq_hz);
double erb_number_to_hz(double erb_number);
double erb_bandwidth_hz(double freq_hz);
// Centres at the midpoints of n equal ERB-number segments of [lo, hi].
std::vector<double> erb_centers(int n_bands, double lo_hz, double hi_hz);

// 4th-order gammatone bands (bandwidth 1.019 ERB, unit gain and zero phase
// at each centre). Throws InputError on range violations.
std::vector<SampledSignal> erb_filterbank(const SampledSignal& s, int n_bands,
                                          double lo_hz, double hi_hz);
// Energy per ERB band without materializing band signals in the caller.
std::vector<double> erb_band_energies(const SampledSignal& s, int n_bands,
                                      double lo_hz, double hi_hz);

// ---------------------------------------------------------------- analysis

// Magnitude of the analytic signal.
SampledSignal envelope(const SampledSignal& s);

struct XCorr {
  std::vector<int> lags;
  std::vector<double> values;
};

// value(tau) = sum_t a(t) b(t + tau) / sqrt(sum a^2 * sum b^2) for
// tau in [-max_lag, max_lag]. Throws NumericError on zero energy.
XCorr normalized_xcorr(std::span<const double> a, std::span<const double> b,
                       int max_lag);
XCorr normalized_xcorr(const SampledSignal& a, const SampledSignal& b,
                       int max_lag);

// Local least-squares polynomial smoothing; edges use the polynomial fitted
// to the first/last full window, so polynomials of degree <= poly_order
// pass through exactly.
std::vector<double> savitzky_golay(std::span<const double> series,
                                   int window_samples, int poly_order);

}  // namespace bincue
