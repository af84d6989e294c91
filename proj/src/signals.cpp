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

#include "bincue/signals.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "bincue/error.hpp"
#include "bincue/fft.hpp"
#include "bincue/kernels.hpp"

namespace bincue {
namespace {

constexpr double kPi = std::numbers::pi;

void PeakNormalize(std::vector<double>& x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::fabs(v));
  if (peak > 0.0) {
    for (double& v : x) v /= peak;
  }
}

void CheckCutoff(const SampledSignal& s, double cutoff_hz, const char* what) {
  if (!(cutoff_hz > 0.0 && cutoff_hz < s.nyquist_hz())) {
    throw InputError(std::string(what) + " cutoff " + std::to_string(cutoff_hz) +
                     " Hz must lie in (0, " + std::to_string(s.nyquist_hz()) +
                     ") Hz");
  }
}

// Butterworth Q values for the two sections of a 4th-order design.
constexpr double kButterQ[2] = {0.54119610014619701, 1.3065629648763764};

Biquad Normalize(double b0, double b1, double b2, double a0, double a1,
                 double a2) {
  return {b0 / a0, b1 / a0, b2 / a0, a1 / a0, a2 / a0};
}

void FilterInPlace(const Biquad& q, std::vector<double>& x, double z1,
                   double z2) {
  for (double& v : x) {
    const double in = v;
    const double out = q.b0 * in + z1;
    z1 = q.b1 * in - q.a1 * out + z2;
    z2 = q.b2 * in - q.a2 * out;
    v = out;
  }
}

// Steady-state section states for a unit step input; also returns the DC
// gain so the next section's input level is known.
void StepState(const Biquad& q, double& z1, double& z2, double& gain) {
  gain = (q.b0 + q.b1 + q.b2) / (1.0 + q.a1 + q.a2);
  z2 = q.b2 - q.a2 * gain;
  z1 = q.b1 - q.a1 * gain + z2;
}

void SosPass(const SosFilter& sos, std::vector<double>& x, bool steady) {
  double level = x.empty() ? 0.0 : x.front();
  for (const Biquad& q : sos) {
    double z1 = 0.0, z2 = 0.0, gain = 0.0;
    if (steady) {
      StepState(q, z1, z2, gain);
      z1 *= level;
      z2 *= level;
      level *= gain;
    }
    FilterInPlace(q, x, z1, z2);
  }
}

std::vector<kernels::GammatoneBand> GammatoneBands(int n_bands, double lo_hz,
                                                   double hi_hz, int rate) {
  if (n_bands < 1) throw InputError("ERB filterbank needs at least one band");
  if (!(lo_hz > 0.0 && lo_hz < hi_hz && hi_hz < 0.5 * rate)) {
    throw InputError("ERB filterbank range must satisfy 0 < lo < hi < Nyquist");
  }
  std::vector<kernels::GammatoneBand> bands;
  for (double fc : erb_centers(n_bands, lo_hz, hi_hz)) {
    const double b = 1.019 * erb_bandwidth_hz(fc);
    bands.push_back({2.0 * kPi * fc / rate, std::exp(-2.0 * kPi * b / rate)});
  }
  return bands;
}

}  // namespace

void SampledSignal::validate() const {
  if (sample_rate_hz <= 0) throw InputError("sample rate must be positive");
  for (double v : samples) {
    if (!std::isfinite(v)) throw InputError("signal contains non-finite samples");
  }
}

void BinauralPair::validate() const {
  left.validate();
  right.validate();
  if (left.sample_rate_hz != right.sample_rate_hz) {
    throw InputError("binaural pair has mismatched sample rates");
  }
  if (left.size() != right.size()) {
    throw InputError("binaural pair has mismatched lengths");
  }
}

std::size_t samples_for(double duration_s, int rate) {
  if (!(duration_s > 0.0)) throw InputError("duration must be positive");
  if (rate <= 0) throw InputError("sample rate must be positive");
  return static_cast<std::size_t>(std::llround(duration_s * rate));
}

double energy(std::span<const double> x) { return kernels::dot(x, x); }

SampledSignal pink_noise(double duration_s, int rate, Rng& rng) {
  const std::size_t n = samples_for(duration_s, rate);
  std::normal_distribution<double> white(0.0, 1.0);
  double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
  auto next = [&]() {
    const double w = white(rng);
    b0 = 0.99886 * b0 + w * 0.0555179;
    b1 = 0.99332 * b1 + w * 0.0750759;
    b2 = 0.96900 * b2 + w * 0.1538520;
    b3 = 0.86650 * b3 + w * 0.3104856;
    b4 = 0.55000 * b4 + w * 0.5329522;
    b5 = -0.7616 * b5 - w * 0.0168980;
    const double out = b0 + b1 + b2 + b3 + b4 + b5 + b6 + w * 0.5362;
    b6 = w * 0.115926;
    return out;
  };
  // Settle the slowest pole (time constant ~900 samples) before recording.
  for (int i = 0; i < 8192; ++i) next();
  SampledSignal s{rate, std::vector<double>(n)};
  for (double& v : s.samples) v = next();
  PeakNormalize(s.samples);
  return s;
}

SampledSignal white_noise(double duration_s, int rate, Rng& rng) {
  const std::size_t n = samples_for(duration_s, rate);
  std::normal_distribution<double> white(0.0, 1.0);
  SampledSignal s{rate, std::vector<double>(n)};
  for (double& v : s.samples) v = white(rng);
  PeakNormalize(s.samples);
  return s;
}

SampledSignal tone(double freq_hz, double duration_s, int rate) {
  const std::size_t n = samples_for(duration_s, rate);
  if (!(freq_hz > 0.0 && freq_hz < 0.5 * rate)) {
    throw InputError("tone frequency " + std::to_string(freq_hz) +
                     " Hz must lie in (0, Nyquist)");
  }
  SampledSignal s{rate, std::vector<double>(n)};
  const std::size_t ramp =
      std::min<std::size_t>(n / 2, static_cast<std::size_t>(std::llround(0.005 * rate)));
  for (std::size_t i = 0; i < n; ++i) {
    double v = std::sin(2.0 * kPi * freq_hz * static_cast<double>(i) / rate);
    if (i < ramp) {
      v *= 0.5 * (1.0 - std::cos(kPi * static_cast<double>(i) / ramp));
    } else if (i >= n - ramp) {
      v *= 0.5 * (1.0 - std::cos(kPi * static_cast<double>(n - 1 - i) / ramp));
    }
    s.samples[i] = v;
  }
  return s;
}

Stimulus build_stimulus(const SampledSignal& core, int rate, Rng& rng) {
  core.validate();
  if (core.sample_rate_hz != rate) {
    throw InputError("core audio is " + std::to_string(core.sample_rate_hz) +
                     " Hz, expected " + std::to_string(rate) + " Hz");
  }
  const std::size_t second = static_cast<std::size_t>(rate);
  const std::size_t have = core.size();
  if (have + 1 < second || have > second + 1) {
    throw InputError("core audio must last 1.0 s (" + std::to_string(second) +
                     " samples), got " + std::to_string(have));
  }
  const SampledSignal head = pink_noise(0.2, rate, rng);
  const SampledSignal tail = pink_noise(0.2, rate, rng);
  const SampledSignal beep = tone(1000.0, 0.2, rate);

  Stimulus out;
  out.signal.sample_rate_hz = rate;
  auto& v = out.signal.samples;
  v.reserve(head.size() + second + tail.size() + beep.size());
  v.insert(v.end(), head.samples.begin(), head.samples.end());
  for (std::size_t i = 0; i < second; ++i) {
    v.push_back(i < have ? core.samples[i] : 0.0);
  }
  v.insert(v.end(), tail.samples.begin(), tail.samples.end());
  v.insert(v.end(), beep.samples.begin(), beep.samples.end());
  const double r = rate;
  out.boundaries_s = {head.size() / r, (head.size() + second) / r,
                      (head.size() + second + tail.size()) / r};
  return out;
}

SosFilter butterworth_lowpass(double cutoff_hz, int rate) {
  const double w0 = 2.0 * kPi * cutoff_hz / rate;
  const double c = std::cos(w0);
  const double one_minus_c = 2.0 * std::sin(0.5 * w0) * std::sin(0.5 * w0);
  SosFilter sos;
  for (double q : kButterQ) {
    const double alpha = std::sin(w0) / (2.0 * q);
    sos.push_back(Normalize(0.5 * one_minus_c, one_minus_c, 0.5 * one_minus_c,
                            1.0 + alpha, -2.0 * c, 1.0 - alpha));
  }
  return sos;
}

SosFilter butterworth_highpass(double cutoff_hz, int rate) {
  const double w0 = 2.0 * kPi * cutoff_hz / rate;
  const double c = std::cos(w0);
  const double one_plus_c = 1.0 + c;
  SosFilter sos;
  for (double q : kButterQ) {
    const double alpha = std::sin(w0) / (2.0 * q);
    sos.push_back(Normalize(0.5 * one_plus_c, -one_plus_c, 0.5 * one_plus_c,
                            1.0 + alpha, -2.0 * c, 1.0 - alpha));
  }
  return sos;
}

double magnitude_response(const SosFilter& sos, double freq_hz, int rate) {
  const std::complex<double> z1 = std::polar(1.0, -2.0 * kPi * freq_hz / rate);
  const std::complex<double> z2 = z1 * z1;
  std::complex<double> h = 1.0;
  for (const Biquad& q : sos) {
    h *= (q.b0 + q.b1 * z1 + q.b2 * z2) / (1.0 + q.a1 * z1 + q.a2 * z2);
  }
  return std::abs(h);
}

std::vector<double> filtfilt(const SosFilter& sos, std::span<const double> x,
                             FilterEdge edge) {
  if (x.empty()) return {};
  if (edge == FilterEdge::kZero) {
    std::vector<double> y(x.begin(), x.end());
    SosPass(sos, y, false);
    std::reverse(y.begin(), y.end());
    SosPass(sos, y, false);
    std::reverse(y.begin(), y.end());
    return y;
  }
  const std::size_t n = x.size();
  const std::size_t pad = std::min<std::size_t>(n - 1, 3 * (2 * sos.size() + 1));
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);
  SosPass(sos, ext, true);
  std::reverse(ext.begin(), ext.end());
  SosPass(sos, ext, true);
  std::reverse(ext.begin(), ext.end());
  return {ext.begin() + static_cast<std::ptrdiff_t>(pad),
          ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

SampledSignal lowpass(const SampledSignal& s, double cutoff_hz,
                      FilterEdge edge) {
  CheckCutoff(s, cutoff_hz, "low-pass");
  return {s.sample_rate_hz,
          filtfilt(butterworth_lowpass(cutoff_hz, s.sample_rate_hz), s.samples, edge)};
}

SampledSignal highpass(const SampledSignal& s, double cutoff_hz,
                       FilterEdge edge) {
  CheckCutoff(s, cutoff_hz, "high-pass");
  return {s.sample_rate_hz,
          filtfilt(butterworth_highpass(cutoff_hz, s.sample_rate_hz), s.samples, edge)};
}

SampledSignal bandpass(const SampledSignal& s, double lo_hz, double hi_hz,
                       FilterEdge edge) {
  CheckCutoff(s, lo_hz, "band-pass lower");
  if (!(hi_hz > lo_hz)) throw InputError("band-pass upper edge must exceed lower edge");
  SosFilter sos = butterworth_highpass(lo_hz, s.sample_rate_hz);
  if (hi_hz < s.nyquist_hz()) {
    const SosFilter lp = butterworth_lowpass(hi_hz, s.sample_rate_hz);
    sos.insert(sos.end(), lp.begin(), lp.end());
  }
  return {s.sample_rate_hz, filtfilt(sos, s.samples, edge)};
}

SosFilter octave_band_filter(double center_hz, int rate) {
  const double lo = center_hz / std::numbers::sqrt2;
  const double hi = center_hz * std::numbers::sqrt2;
  SosFilter sos = butterworth_highpass(lo, rate);
  if (hi < 0.5 * rate) {
    const SosFilter lp = butterworth_lowpass(hi, rate);
    sos.insert(sos.end(), lp.begin(), lp.end());
  }
  return sos;
}

std::vector<SampledSignal> octave_filterbank(const SampledSignal& s,
                                             std::span<const double> centers_hz,
                                             FilterEdge edge) {
  std::vector<SampledSignal> bands;
  bands.reserve(centers_hz.size());
  for (double fc : centers_hz) {
    CheckCutoff(s, fc, "octave band centre");
    bands.push_back({s.sample_rate_hz,
                     filtfilt(octave_band_filter(fc, s.sample_rate_hz), s.samples, edge)});
  }
  return bands;
}

double erb_number(double freq_hz) {
  return 21.4 * std::log10(4.37 * freq_hz / 1000.0 + 1.0);
}

double erb_number_to_hz(double erb) {
  return (std::pow(10.0, erb / 21.4) - 1.0) * 1000.0 / 4.37;
}

double erb_bandwidth_hz(double freq_hz) {
  return 24.7 * (4.37 * freq_hz / 1000.0 + 1.0);
}

std::vector<double> erb_centers(int n_bands, double lo_hz, double hi_hz) {
  if (n_bands < 1) throw InputError("ERB filterbank needs at least one band");
  if (!(lo_hz > 0.0 && lo_hz < hi_hz)) {
    throw InputError("ERB range must satisfy 0 < lo < hi");
  }
  const double e_lo = erb_number(lo_hz);
  const double step = (erb_number(hi_hz) - e_lo) / n_bands;
  std::vector<double> centers(static_cast<std::size_t>(n_bands));
  for (int k = 0; k < n_bands; ++k) {
    centers[static_cast<std::size_t>(k)] = erb_number_to_hz(e_lo + (k + 0.5) * step);
  }
  return centers;
}

std::vector<SampledSignal> erb_filterbank(const SampledSignal& s, int n_bands,
                                          double lo_hz, double hi_hz) {
  const auto bands = GammatoneBands(n_bands, lo_hz, hi_hz, s.sample_rate_hz);
  const std::vector<double> flat = kernels::gammatone_bank(s.samples, bands);
  std::vector<SampledSignal> out;
  out.reserve(bands.size());
  const std::size_t n = s.size();
  for (std::size_t b = 0; b < bands.size(); ++b) {
    out.push_back({s.sample_rate_hz,
                   std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(b * n),
                                       flat.begin() + static_cast<std::ptrdiff_t>((b + 1) * n))});
  }
  return out;
}

std::vector<double> erb_band_energies(const SampledSignal& s, int n_bands,
                                      double lo_hz, double hi_hz) {
  const auto bands = GammatoneBands(n_bands, lo_hz, hi_hz, s.sample_rate_hz);
  const std::vector<double> flat = kernels::gammatone_bank(s.samples, bands);
  const std::size_t n = s.size();
  std::vector<double> e(bands.size());
  for (std::size_t b = 0; b < bands.size(); ++b) {
    e[b] = energy(std::span<const double>(flat).subspan(b * n, n));
  }
  return e;
}

SampledSignal envelope(const SampledSignal& s) {
  const std::size_t n = s.size();
  if (n == 0) return {s.sample_rate_hz, {}};
  const std::size_t nfft = fft::next_fast_size(n);
  const auto half = fft::rfft(s.samples, nfft);
  std::vector<std::complex<double>> analytic(nfft, 0.0);
  analytic[0] = half[0];
  for (std::size_t k = 1; k < half.size(); ++k) {
    const bool nyquist_bin = (nfft % 2 == 0) && k == nfft / 2;
    analytic[k] = nyquist_bin ? half[k] : 2.0 * half[k];
  }
  const auto z = fft::cfft(analytic, nfft, /*inverse=*/true);
  SampledSignal out{s.sample_rate_hz, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) out.samples[i] = std::abs(z[i]);
  return out;
}

XCorr normalized_xcorr(std::span<const double> a, std::span<const double> b,
                       int max_lag) {
  if (max_lag < 0) throw InputError("max lag must be non-negative");
  const std::size_t shortest = std::min(a.size(), b.size());
  if (static_cast<std::size_t>(max_lag) >= shortest) {
    throw InputError("max lag " + std::to_string(max_lag) +
                     " must be shorter than the signals (" +
                     std::to_string(shortest) + " samples)");
  }
  const double ea = kernels::dot(a, a);
  const double eb = kernels::dot(b, b);
  if (!(ea > 0.0) || !(eb > 0.0)) {
    throw NumericError("normalized cross-correlation of a zero-energy signal");
  }
  const double norm = std::sqrt(ea * eb);
  XCorr r;
  r.lags.reserve(static_cast<std::size_t>(2 * max_lag + 1));
  r.values.reserve(r.lags.capacity());
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    // sum over t of a(t) b(t + lag) where both indices are valid.
    const std::size_t ia = lag < 0 ? static_cast<std::size_t>(-lag) : 0;
    const std::size_t ib = lag > 0 ? static_cast<std::size_t>(lag) : 0;
    const std::size_t len = std::min(a.size() - ia, b.size() - ib);
    const double v = kernels::dot(a.subspan(ia, len), b.subspan(ib, len)) / norm;
    r.lags.push_back(lag);
    r.values.push_back(std::clamp(v, -1.0, 1.0));
  }
  return r;
}

XCorr normalized_xcorr(const SampledSignal& a, const SampledSignal& b,
                       int max_lag) {
  if (a.sample_rate_hz != b.sample_rate_hz) {
    throw InputError("cross-correlation inputs have different sample rates");
  }
  return normalized_xcorr(std::span<const double>(a.samples),
                          std::span<const double>(b.samples), max_lag);
}

std::vector<double> savitzky_golay(std::span<const double> series,
                                   int window_samples, int poly_order) {
  if (window_samples < 1 || window_samples % 2 == 0) {
    throw InputError("Savitzky-Golay window must be a positive odd length");
  }
  if (poly_order < 0 || poly_order >= window_samples) {
    throw InputError("Savitzky-Golay order must be in [0, window)");
  }
  const std::size_t w = static_cast<std::size_t>(window_samples);
  if (series.size() < w) {
    throw InputError("series of " + std::to_string(series.size()) +
                     " samples is shorter than the smoothing window (" +
                     std::to_string(w) + ")");
  }
  const int half = window_samples / 2;
  Eigen::MatrixXd vander(window_samples, poly_order + 1);
  for (int i = 0; i < window_samples; ++i) {
    const double t = static_cast<double>(i - half) / std::max(half, 1);
    double p = 1.0;
    for (int j = 0; j <= poly_order; ++j) {
      vander(i, j) = p;
      p *= t;
    }
  }
  // Hat matrix: row r holds the weights giving the fitted value at window
  // position r.
  const Eigen::MatrixXd hat =
      vander * vander.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(window_samples, window_samples));

  const std::size_t n = series.size();
  std::vector<double> out(n);
  auto apply = [&](int row, std::size_t start) {
    double acc = 0.0;
    for (std::size_t k = 0; k < w; ++k) acc += hat(row, static_cast<int>(k)) * series[start + k];
    return acc;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (i < static_cast<std::size_t>(half)) {
      out[i] = apply(static_cast<int>(i), 0);
    } else if (i + half >= n) {
      out[i] = apply(static_cast<int>(i + w - n), n - w);
    } else {
      out[i] = apply(half, i - half);
    }
  }
  return out;
}

}  // namespace bincue
