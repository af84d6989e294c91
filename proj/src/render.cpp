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


#include "bincue/render.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "bincue/error.hpp"
#include "bincue/fft.hpp"
#include "bincue/kernels.hpp"
#include "bincue/wav.hpp"

namespace bincue {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kLeadPad = 128;
constexpr std::size_t kTrailPad = 128;
constexpr int kHalfTaps = 16;  // 32-tap fractional delay
constexpr double kDefaultDirectRule = -6.0;
constexpr double kDefaultReference = 1.0;
// 60 dB of energy decay: ln(10^6).
constexpr double kLn1e6 = 13.815510557964274;
constexpr double kFadeInS = 0.002;
constexpr int kFlattenPasses = 8;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

double db_to_amp(double db) { return std::pow(10.0, db / 20.0); }

void check_rate(int rate) {
  if (rate <= 0) throw InputError("sample rate must be positive");
}

// Zero-phase one-pole low-pass, silence outside the buffer.
void shadow_lowpass(std::vector<double>& x, double cutoff_hz, int rate) {
  const double p = std::exp(-2.0 * kPi * cutoff_hz / rate);
  const double g = 1.0 - p;
  double y = 0.0;
  for (double& v : x) v = y = g * v + p * y;
  y = 0.0;
  for (auto it = x.rbegin(); it != x.rend(); ++it) *it = y = g * *it + p * y;
}

struct EarPath {
  double path_m;
  double incidence_rad;  // angle between ear normal and source direction
};

EarPath ear_path(const Vec3& s, double r, double a, double ear_sign) {
  const double cos_g = std::clamp(ear_sign * s.y / r, -1.0, 1.0);
  const double g = std::acos(cos_g);
  const double g0 = std::acos(a / r);
  double path;
  if (g <= g0) {
    const double dy = s.y - ear_sign * a;
    path = std::sqrt(s.x * s.x + dy * dy + s.z * s.z);
  } else {
    path = std::sqrt(r * r - a * a) + a * (g - g0);
  }
  return {path, g};
}

// Least-squares line through (i*dt, curve[i]) for points inside
// [lo_db, hi_db]; returns the time to fall 60 dB.
double decay_fit(std::span<const double> curve_db, double dt, double hi_db,
                 double lo_db) {
  double n = 0, st = 0, sl = 0, stt = 0, stl = 0;
  bool reached = false;
  for (std::size_t i = 0; i < curve_db.size(); ++i) {
    const double l = curve_db[i];
    if (l < lo_db) {
      reached = true;
      break;
    }
    if (l > hi_db) continue;
    const double t = static_cast<double>(i) * dt;
    n += 1;
    st += t;
    sl += l;
    stt += t * t;
    stl += t * l;
  }
  if (!reached || n < 3)
    throw NumericError("insufficient decay range for the fit");
  const double slope = (n * stl - st * sl) / (n * stt - st * st);
  if (!(slope < 0)) throw NumericError("decay curve does not fall");
  return -60.0 / slope;
}

// ---- tail calibration model

double edc_weight(double t, double t30, double dur) {
  const double a = kLn1e6 / t30;
  const double end = std::exp(-a * dur);
  return (std::exp(-a * t) - end) / (1.0 - end);
}

struct TailModel {
  std::vector<double> grid;
  double dt;
  double dur;

  TailModel(double duration_s) : dt(1e-3), dur(duration_s) {
    for (double t = 0; t < duration_s; t += dt) grid.push_back(t);
  }

  // T30 of sum_k mix[k] * w[k] * exp-decay(T[k]).
  double fit(std::span<const double> mix, std::span<const double> w,
             std::span<const double> t30) const {
    std::vector<double> curve(grid.size(), 0.0);
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double c = mix[k] * w[k];
      if (c == 0) continue;
      for (std::size_t i = 0; i < grid.size(); ++i)
        curve[i] += c * edc_weight(grid[i], t30[k], dur);
    }
    const double e0 = curve[0];
    for (double& v : curve)
      v = 10.0 * std::log10(std::max(v / e0, 1e-300));
    return decay_fit(curve, dt, -5.0, -35.0);
  }
};

std::vector<double> tilt_weights(std::span<const double> fc,
                                 std::span<const double> boost, double tilt) {
  std::vector<double> w(fc.size());
  double sum = 0;
  for (std::size_t k = 0; k < fc.size(); ++k) {
    w[k] = boost[k] * std::pow(fc[k] / 1000.0, tilt);
    sum += w[k];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Constant-envelope band noise. The band is generated at complex baseband
// (oversampled 4x) and alternately flattened in magnitude and restricted to
// the band, which leaves an almost flat envelope even for bands a few tens
// of hertz wide. The result is placed at the band position of a length-m
// real spectrum.
std::vector<double> band_noise(std::size_t n, std::size_t m, int rate,
                               double lo, double hi, Rng& rng) {
  std::normal_distribution<double> gauss;
  const double df = static_cast<double>(rate) / static_cast<double>(m);
  const auto j0 = static_cast<std::size_t>(std::ceil(lo / df));
  const auto j1 = std::min(static_cast<std::size_t>(std::ceil(hi / df)),
                           m / 2 + 1);
  std::vector<double> x(n, 0.0);
  if (j1 <= j0) return x;
  const std::size_t nb = j1 - j0;
  const std::size_t len = fft::next_fast_size(std::max<std::size_t>(4 * nb, 64));
  std::vector<std::complex<double>> z(len);
  for (std::size_t j = 0; j < nb; ++j) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    z[j] = {re, im};
  }
  for (int pass = 0; pass < kFlattenPasses; ++pass) {
    auto t = fft::cfft(z, len, true);
    for (auto& v : t) {
      const double mag = std::abs(v);
      v = mag > 0 ? v / mag : 0.0;
    }
    z = fft::cfft(t, len, false);
    std::fill(z.begin() + static_cast<std::ptrdiff_t>(nb), z.end(), 0.0);
  }
  std::vector<std::complex<double>> spec(m / 2 + 1);
  for (std::size_t j = 0; j < nb; ++j) spec[j0 + j] = z[j];
  auto full = fft::irfft(spec, m);
  std::copy_n(full.begin(), n, x.begin());
  return x;
}

void remove_component(std::vector<double>& x, const std::vector<double>& basis,
                      double basis_energy) {
  if (basis_energy <= 0) return;
  const double c = kernels::dot(x, basis) / basis_energy;
  kernels::axpy(-c, basis, x);
}

}  // namespace

// ---------------------------------------------------------------- models

void HeadModel::validate() const {
  if (!(head_radius_m > 0) || !std::isfinite(head_radius_m))
    throw InputError("head radius must be positive");
  if (!(speed_of_sound_m_s > 0) || !std::isfinite(speed_of_sound_m_s))
    throw InputError("speed of sound must be positive");
  if (!(shadow_cutoff_ipsi_hz > 0) || !(shadow_cutoff_contra_hz > 0))
    throw InputError("shadow cutoffs must be positive");
  if (shadow_cutoff_contra_hz > shadow_cutoff_ipsi_hz)
    throw InputError("contralateral shadow cutoff exceeds the ipsilateral one");
}

RoomAcoustics RoomAcoustics::table_defaults() {
  RoomAcoustics r;
  r.band_centers_hz = {31.5, 63, 125, 250, 500, 1000, 2000, 4000, 8000, 16000};
  r.t30_s = {0.787, 0.799, 0.794, 0.637, 0.561,
             0.834, 0.707, 0.672, 0.549, 0.376};
  r.edt_s = {0.840, 0.699, 0.747, 0.607, 0.653,
             0.663, 0.675, 0.623, 0.530, 0.372};
  r.broadband_t30_s = 0.581;
  r.broadband_edt_s = 0.594;
  return r;
}

void RoomAcoustics::validate() const {
  if (band_centers_hz.empty()) throw InputError("room has no bands");
  if (t30_s.size() != band_centers_hz.size())
    throw InputError("room needs exactly one T30 per band centre");
  if (!edt_s.empty() && edt_s.size() != band_centers_hz.size())
    throw InputError("room needs exactly one EDT per band centre");
  for (std::size_t i = 0; i < band_centers_hz.size(); ++i) {
    if (!(band_centers_hz[i] > 0))
      throw InputError("band centres must be positive");
    if (i > 0 && !(band_centers_hz[i] > band_centers_hz[i - 1]))
      throw InputError("band centres must increase");
  }
  for (double v : t30_s)
    if (!(v > 0) || !std::isfinite(v)) throw InputError("T30 must be > 0");
  for (double v : edt_s)
    if (!(v > 0) || !std::isfinite(v)) throw InputError("EDT must be > 0");
  if (broadband_t30_s && !(*broadband_t30_s > 0))
    throw InputError("broadband T30 must be > 0");
  if (broadband_edt_s && !(*broadband_edt_s > 0))
    throw InputError("broadband EDT must be > 0");
  if (!(reference_distance_m > 0))
    throw InputError("reference distance must be > 0");
  if (!std::isfinite(direct_rule_db_per_doubling) ||
      !std::isfinite(reverb_rule_db_per_doubling) ||
      !std::isfinite(tail_level_db_at_reference))
    throw InputError("room levels must be finite");
}

double distance_gain_db(double distance_m, double reference_m,
                        double rule_db_per_doubling) {
  if (!(distance_m > 0) || !(reference_m > 0))
    throw InputError("distances must be positive");
  return rule_db_per_doubling * std::log2(distance_m / reference_m);
}

// ---------------------------------------------------------------- head IR

BinauralIR spherical_head_ir(const HeadModel& head, const SourcePosition& p,
                             int rate) {
  head.validate();
  check_rate(rate);
  const double a = head.head_radius_m;
  const double r = p.distance_m;
  if (!(r > a)) throw InputError("source inside head sphere");
  const Vec3 s = to_cartesian(p);

  const EarPath ears[2] = {ear_path(s, r, a, +1.0), ear_path(s, r, a, -1.0)};
  double delay[2];
  for (int e = 0; e < 2; ++e)
    delay[e] = static_cast<double>(kLeadPad) +
               ears[e].path_m / head.speed_of_sound_m_s * rate;
  const auto len = static_cast<std::size_t>(
                       std::ceil(std::max(delay[0], delay[1]))) +
                   kHalfTaps + 1 + kTrailPad;

  std::vector<double> out[2];
  for (int e = 0; e < 2; ++e) {
    std::vector<double> h(len, 0.0);
    const auto n0 = static_cast<long>(std::floor(delay[e]));
    double sum = 0;
    for (long k = n0 - kHalfTaps + 1; k <= n0 + kHalfTaps; ++k) {
      const double x = static_cast<double>(k) - delay[e];
      const double w = 0.42 + 0.5 * std::cos(kPi * x / kHalfTaps) +
                       0.08 * std::cos(2 * kPi * x / kHalfTaps);
      h[static_cast<std::size_t>(k)] = sinc(x) * w;
      sum += sinc(x) * w;
    }
    const double gain = r / ears[e].path_m / sum;
    for (double& v : h) v *= gain;
    // Cutoff depends on incidence only, so the shadow does not change with
    // distance: ipsilateral cutoff up to 90 deg, then log-sliding to the
    // contralateral cutoff at 180 deg.
    const double frac = std::clamp(2.0 * ears[e].incidence_rad / kPi - 1.0,
                                   0.0, 1.0);
    const double fc =
        head.shadow_cutoff_ipsi_hz *
        std::pow(head.shadow_cutoff_contra_hz / head.shadow_cutoff_ipsi_hz,
                 frac);
    if (fc < 0.5 * rate) shadow_lowpass(h, fc, rate);
    out[e] = std::move(h);
  }

  BinauralIR ir;
  ir.pair.left = {rate, std::move(out[0])};
  ir.pair.right = {rate, std::move(out[1])};
  ir.position = p;
  ir.condition = Condition::kAnechoic;
  ir.onset_index =
      static_cast<std::size_t>(std::floor(std::min(delay[0], delay[1])));
  ir.left_delay_s = ears[0].path_m / head.speed_of_sound_m_s;
  ir.right_delay_s = ears[1].path_m / head.speed_of_sound_m_s;
  return ir;
}

BinauralIR SphericalHeadSource::direct_ir(const SourcePosition& p,
                                          int rate) const {
  return spherical_head_ir(head_, p, rate);
}

// ---------------------------------------------------------------- IR sets

MeasuredIrSet MeasuredIrSet::load(const std::filesystem::path& dir) {
  const auto manifest = dir / "manifest.csv";
  std::ifstream in(manifest);
  if (!in) throw InputError("cannot open " + manifest.string());
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty IR manifest");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "file,azimuth_deg,elevation_deg,distance_m")
    throw InputError("IR manifest header must be "
                     "file,azimuth_deg,elevation_deg,distance_m");
  MeasuredIrSet set;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 4)
      throw InputError("IR manifest line " + std::to_string(lineno) +
                       ": expected 4 fields");
    Entry e;
    try {
      e.position = make_position(std::stod(f[1]), std::stod(f[2]),
                                 std::stod(f[3]));
    } catch (const std::logic_error&) {
      throw InputError("IR manifest line " + std::to_string(lineno) +
                       ": bad position");
    }
    e.pair = wav::read_stereo(dir / f[0]);
    set.entries_.push_back(std::move(e));
  }
  if (set.entries_.empty()) throw InputError("IR manifest lists no files");
  return set;
}

BinauralIR MeasuredIrSet::direct_ir(const SourcePosition& p, int rate) const {
  const Vec3 u = unit_vector(p.direction);
  const Entry* best = nullptr;
  double best_cos = -2, best_ld = 0;
  for (const Entry& e : entries_) {
    const Vec3 v = unit_vector(e.position.direction);
    const double c = u.x * v.x + u.y * v.y + u.z * v.z;
    const double ld = std::abs(std::log(e.position.distance_m / p.distance_m));
    if (c > best_cos + 1e-12 || (std::abs(c - best_cos) <= 1e-12 &&
                                 ld < best_ld)) {
      best = &e;
      best_cos = c;
      best_ld = ld;
    }
  }
  if (best->pair.sample_rate_hz() != rate)
    throw InputError("measured IR rate " +
                     std::to_string(best->pair.sample_rate_hz()) +
                     " Hz does not match " + std::to_string(rate) + " Hz");
  BinauralIR ir;
  ir.pair = best->pair;
  ir.position = best->position;
  double peak = 0;
  for (double v : ir.pair.left.samples) peak = std::max(peak, std::abs(v));
  for (double v : ir.pair.right.samples) peak = std::max(peak, std::abs(v));
  // Onset: first sample within 20 dB of the peak on either ear.
  const double thr = 0.1 * peak;
  std::size_t onset = 0;
  for (std::size_t i = 0; i < ir.pair.size(); ++i) {
    if (std::abs(ir.pair.left.samples[i]) >= thr ||
        std::abs(ir.pair.right.samples[i]) >= thr) {
      onset = i;
      break;
    }
  }
  ir.onset_index = onset;
  ir.left_delay_s = ir.right_delay_s = static_cast<double>(onset) / rate;
  return ir;
}

// ---------------------------------------------------------------- tail

TailDesign design_tail(const RoomAcoustics& room, const HeadModel& head,
                       int rate, double duration_s) {
  room.validate();
  head.validate();
  check_rate(rate);
  const double max_t30 = *std::max_element(room.t30_s.begin(),
                                           room.t30_s.end());
  if (!(duration_s >= max_t30))
    throw InputError("tail duration must be at least the longest T30");
  const double nyq = 0.5 * rate;
  const std::size_t nb = room.band_centers_hz.size();
  const auto& fc = room.band_centers_hz;

  TailDesign d;
  d.duration_s = duration_s;
  d.sample_rate_hz = rate;
  for (std::size_t k = 0; k < nb; ++k) {
    const double lo = fc[k] / std::numbers::sqrt2;
    const double hi = std::min(fc[k] * std::numbers::sqrt2, nyq);
    if (!(lo < nyq)) throw InputError("band centre too close to Nyquist");
    d.band_lo_hz.push_back(lo);
    d.band_hi_hz.push_back(hi);
    const double x = 2 * kPi * fc[k] * head.ear_spacing_m() /
                     head.speed_of_sound_m_s;
    d.coherence.push_back(std::sin(x) / x);
  }

  // Energy leakage of synthesis band k into analysis band b after
  // forward-backward octave filtering.
  std::vector<std::vector<double>> leak(nb, std::vector<double>(nb));
  constexpr int kProbe = 64;
  for (std::size_t b = 0; b < nb; ++b) {
    const SosFilter sos = octave_band_filter(fc[b], rate);
    for (std::size_t k = 0; k < nb; ++k) {
      double acc = 0;
      for (int i = 0; i < kProbe; ++i) {
        const double f = d.band_lo_hz[k] + (d.band_hi_hz[k] - d.band_lo_hz[k]) *
                                               (i + 0.5) / kProbe;
        const double m = magnitude_response(sos, f, rate);
        acc += m * m * m * m;
      }
      leak[b][k] = acc / kProbe;
    }
  }

  const TailModel model(duration_s);
  const std::vector<double> ones(nb, 1.0);
  std::vector<double> t_syn = room.t30_s;
  std::vector<double> boost(nb, 1.0);
  double tilt = 1.0;
  std::vector<double> w;
  bool converged = false;
  for (int iter = 0; iter < 400 && !converged; ++iter) {
    if (room.broadband_t30_s) {
      const double target = *room.broadband_t30_s;
      auto f = [&](double b) {
        return model.fit(ones, tilt_weights(fc, boost, b), t_syn) - target;
      };
      double lo = -4, hi = 4;
      double flo = f(lo);
      if (flo * f(hi) > 0)
        throw NumericError("broadband T30 target unreachable by spectral tilt");
      for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      tilt = 0.5 * (lo + hi);
    }
    w = tilt_weights(fc, boost, tilt);
    double worst = 0;
    for (std::size_t b = 0; b < nb; ++b) {
      const double pred = model.fit(leak[b], w, t_syn);
      worst = std::max(worst, std::abs(pred / room.t30_s[b] - 1.0));
      t_syn[b] *= room.t30_s[b] / pred;
      // A band swamped by a slower neighbour cannot be fixed by shortening
      // its own decay; raise its level instead.
      if (t_syn[b] < 0.8 * room.t30_s[b]) {
        t_syn[b] = 0.8 * room.t30_s[b];
        boost[b] *= 1.25;
      }
    }
    converged = worst < 1e-6;
  }
  if (!converged) throw NumericError("tail calibration did not converge");
  const BinauralIR front = spherical_head_ir(
      head, make_position(0.0, 0.0, room.reference_distance_m), rate);
  d.reference_direct_energy = 0.5 * (energy(front.pair.left.samples) +
                                     energy(front.pair.right.samples));
  d.synthesis_t30_s = t_syn;
  d.band_energy = w;
  d.spectral_tilt = tilt;
  return d;
}

std::vector<BinauralPair> synth_reverb_tail_bands(const TailDesign& design,
                                                  const RoomAcoustics& room,
                                                  int rate, Rng& rng) {
  if (rate != design.sample_rate_hz)
    throw InputError("tail design was made for another sample rate");
  const std::size_t n = samples_for(design.duration_s, rate);
  const std::size_t m = fft::next_fast_size(n);
  const std::size_t nf = std::min(n, samples_for(kFadeInS, rate));
  std::vector<double> env(n);
  std::vector<BinauralPair> bands;
  double total = 0;
  for (std::size_t b = 0; b < design.band_energy.size(); ++b) {
    const double k = 0.5 * kLn1e6 / design.synthesis_t30_s[b];
    for (std::size_t i = 0; i < n; ++i)
      env[i] = std::exp(-k * static_cast<double>(i) / rate);
    std::vector<double> src[2];
    for (auto& x : src) {
      x = band_noise(n, m, rate, design.band_lo_hz[b], design.band_hi_hz[b],
                     rng);
      for (std::size_t i = 0; i < n; ++i) x[i] *= env[i];
    }
    remove_component(src[1], src[0], kernels::dot(src[0], src[0]));
    for (auto& x : src) {
      const double e = kernels::dot(x, x);
      if (!(e > 0)) throw NumericError("empty tail band");
      const double g = 1.0 / std::sqrt(e);
      for (double& v : x) v *= g;
    }
    // Sum and difference of two orthogonal unit sources: zero-lag
    // correlation a^2 - b^2 = rho, and the cross terms cancel in the summed
    // ear energy.
    const double rho = design.coherence[b];
    const double g = std::sqrt(design.band_energy[b]);
    const double ca = g * std::sqrt(0.5 * (1.0 + rho));
    const double cb = g * std::sqrt(0.5 * (1.0 - rho));
    std::vector<double> left(n), right(n);
    for (std::size_t i = 0; i < n; ++i) {
      double w = 1.0;
      if (i < nf)
        w = 0.5 - 0.5 * std::cos(kPi * static_cast<double>(i) /
                                 static_cast<double>(nf));
      left[i] = w * (ca * src[0][i] + cb * src[1][i]);
      right[i] = w * (ca * src[0][i] - cb * src[1][i]);
    }
    bands.push_back({{rate, std::move(left)}, {rate, std::move(right)}});
  }
  // Level is set on the sum of the bands.
  std::vector<double> sum_l(n, 0.0), sum_r(n, 0.0);
  for (const auto& p : bands) {
    kernels::axpy(1.0, p.left.samples, sum_l);
    kernels::axpy(1.0, p.right.samples, sum_r);
  }
  total = 0.5 * (kernels::dot(sum_l, sum_l) + kernels::dot(sum_r, sum_r));
  if (!(total > 0)) throw NumericError("empty reverberation tail");
  const double g = std::sqrt(design.reference_direct_energy *
                             std::pow(10.0, room.tail_level_db_at_reference /
                                                10.0) / total);
  for (auto& p : bands) {
    for (double& v : p.left.samples) v *= g;
    for (double& v : p.right.samples) v *= g;
  }
  return bands;
}

BinauralPair synth_reverb_tail(const TailDesign& design,
                               const RoomAcoustics& room, int rate,
                               Rng& rng) {
  const auto bands = synth_reverb_tail_bands(design, room, rate, rng);
  const std::size_t n = samples_for(design.duration_s, rate);
  std::vector<double> left(n, 0.0), right(n, 0.0);
  for (const auto& p : bands) {
    kernels::axpy(1.0, p.left.samples, left);
    kernels::axpy(1.0, p.right.samples, right);
  }
  return {{rate, std::move(left)}, {rate, std::move(right)}};
}

BinauralPair synth_reverb_tail(const RoomAcoustics& room,
                               const HeadModel& head, int rate,
                               double duration_s, Rng& rng) {
  return synth_reverb_tail(design_tail(room, head, rate, duration_s), room,
                           rate, rng);
}

// ---------------------------------------------------------------- render

std::vector<double> convolve(std::span<const double> x,
                             std::span<const double> h) {
  if (x.empty() || h.empty()) return {};
  if (std::min(x.size(), h.size()) <= 256) return kernels::convolve_direct(x, h);
  return fft::convolve(x, h);
}

Rendered render_with_ir(const SampledSignal& signal, const BinauralIR& direct,
                        const RoomAcoustics* room, const BinauralPair* tail,
                        bool normalize_headroom) {
  signal.validate();
  direct.pair.validate();
  const int rate = signal.sample_rate_hz;
  if (direct.pair.sample_rate_hz() != rate)
    throw InputError("IR and signal sample rates differ");
  if (tail) {
    tail->validate();
    if (tail->sample_rate_hz() != rate)
      throw InputError("tail and signal sample rates differ");
    if (!room) throw InputError("a tail needs room acoustics");
  }
  if (room) room->validate();
  const double ref = room ? room->reference_distance_m : kDefaultReference;
  const double rule = room ? room->direct_rule_db_per_doubling
                           : kDefaultDirectRule;
  const double dist = direct.position.distance_m;
  const double gd = db_to_amp(distance_gain_db(dist, ref, rule));

  auto l = convolve(signal.samples, direct.pair.left.samples);
  auto r = convolve(signal.samples, direct.pair.right.samples);
  for (double& v : l) v *= gd;
  for (double& v : r) v *= gd;
  if (tail) {
    const double gr = db_to_amp(
        distance_gain_db(dist, ref, room->reverb_rule_db_per_doubling));
    const auto tl = convolve(signal.samples, tail->left.samples);
    const auto tr = convolve(signal.samples, tail->right.samples);
    const std::size_t off = direct.onset_index;
    const std::size_t len = std::max(l.size(), off + tl.size());
    l.resize(len, 0.0);
    r.resize(len, 0.0);
    for (std::size_t i = 0; i < tl.size(); ++i) {
      l[off + i] += gr * tl[i];
      r[off + i] += gr * tr[i];
    }
  }
  Rendered out;
  out.direct_onset = direct.onset_index;
  if (normalize_headroom) {
    double peak = 0;
    for (double v : l) peak = std::max(peak, std::abs(v));
    for (double v : r) peak = std::max(peak, std::abs(v));
    if (peak > 1.0) {
      out.headroom_gain = 1.0 / peak;
      for (double& v : l) v *= out.headroom_gain;
      for (double& v : r) v *= out.headroom_gain;
    }
  }
  out.pair = {{rate, std::move(l)}, {rate, std::move(r)}};
  return out;
}

Rendered render(const SampledSignal& signal, const SourcePosition& p,
                const HeadModel& head, const RoomAcoustics* room, Rng& rng,
                double tail_duration_s) {
  BinauralIR ir = spherical_head_ir(head, p, signal.sample_rate_hz);
  if (!room) return render_with_ir(signal, ir, nullptr, nullptr);
  ir.condition = Condition::kReverberant;
  const BinauralPair tail = synth_reverb_tail(
      *room, head, signal.sample_rate_hz, tail_duration_s, rng);
  return render_with_ir(signal, ir, room, &tail);
}

// ---------------------------------------------------------------- decay

std::vector<double> schroeder_curve_db(std::span<const double> ir) {
  std::vector<double> e(ir.size());
  double acc = 0;
  for (std::size_t i = ir.size(); i-- > 0;) {
    acc += ir[i] * ir[i];
    e[i] = acc;
  }
  if (!(acc > 0)) throw NumericError("impulse response has no energy");
  for (double& v : e)
    v = v > 0 ? 10.0 * std::log10(v / acc)
              : -std::numeric_limits<double>::infinity();
  return e;
}

namespace {

void check_noise_floor(std::span<const double> ir, int rate) {
  check_rate(rate);
  const std::size_t win = std::max<std::size_t>(1, samples_for(0.01, rate));
  if (ir.size() < 10 || ir.size() < win)
    throw NumericError("impulse response too short for decay analysis");
  double run = 0, peak = 0;
  for (std::size_t i = 0; i < ir.size(); ++i) {
    run += ir[i] * ir[i];
    if (i >= win) run -= ir[i - win] * ir[i - win];
    peak = std::max(peak, run / static_cast<double>(win));
  }
  const std::size_t tail0 = ir.size() - ir.size() / 10;
  double floor = 0;
  for (std::size_t i = tail0; i < ir.size(); ++i) floor += ir[i] * ir[i];
  floor /= static_cast<double>(ir.size() - tail0);
  if (floor > 0 && 10.0 * std::log10(peak / floor) < 35.0)
    throw NumericError(
        "insufficient decay range (< 35 dB above noise floor)");
}

}  // namespace

double estimate_t30(std::span<const double> ir_band, int rate) {
  check_noise_floor(ir_band, rate);
  const auto curve = schroeder_curve_db(ir_band);
  return decay_fit(curve, 1.0 / rate, -5.0, -35.0);
}

double estimate_edt(std::span<const double> ir_band, int rate) {
  check_noise_floor(ir_band, rate);
  const auto curve = schroeder_curve_db(ir_band);
  return decay_fit(curve, 1.0 / rate, 0.0, -10.0);
}

}  // namespace bincue
