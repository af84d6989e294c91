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

// Binaural synthesis: analytic spherical-head impulse responses,
// distance attenuation, a parametric diffuse reverberation tail matched to
// per-octave T30 targets, and Schroeder-based decay estimation.

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "bincue/condition.hpp"
#include "bincue/geometry.hpp"
#include "bincue/random.hpp"
#include "bincue/signals.hpp"

namespace bincue {

struct HeadModel {
  double head_radius_m = 0.0875;
  double speed_of_sound_m_s = 343.0;
  // Shadow low-pass cutoff for an ear at incidence <= 90 deg and for an ear
  // facing directly away (180 deg); log-interpolated in between.
  double shadow_cutoff_ipsi_hz = 10000.0;
  double shadow_cutoff_contra_hz = 1500.0;

  void validate() const;
  double ear_spacing_m() const { return 2.0 * head_radius_m; }
};

struct RoomAcoustics {
  std::vector<double> band_centers_hz;
  std::vector<double> t30_s;
  std::vector<double> edt_s;
  // Optional broadband decay target; when present the tail spectrum is
  // tilted so the broadband T30 matches it.
  std::optional<double> broadband_t30_s;
  std::optional<double> broadband_edt_s;
  double direct_rule_db_per_doubling = -6.0;
  double reverb_rule_db_per_doubling = -3.0;
  double reference_distance_m = 1.0;
  // Tail energy per ear at the reference distance, relative to the energy
  // of the frontal direct path at that distance (so -3 dB means a
  // direct-to-reverberant ratio of +3 dB).
  double tail_level_db_at_reference = -3.0;

  // Octave-band T30/EDT of the reference listening room.
  static RoomAcoustics table_defaults();
  void validate() const;
};

struct BinauralIR {
  BinauralPair pair;
  SourcePosition position;
  Condition condition = Condition::kAnechoic;
  std::size_t onset_index = 0;  // first direct-path arrival
  double left_delay_s = 0.0;
  double right_delay_s = 0.0;
};

// Point source around a rigid sphere: per-ear path length (straight line
// when the ear is visible, tangent plus arc when shadowed), 32-tap
// windowed-sinc fractional delay, gain distance/path, and a zero-phase
// one-pole shadow low-pass whose cutoff falls with the ear's incidence
// angle. Throws InputError when the source is inside the head.
BinauralIR spherical_head_ir(const HeadModel& head, const SourcePosition& p,
                             int rate);

// Supplies direct-path impulse responses for a source position.
class IrSource {
 public:
  virtual ~IrSource() = default;
  virtual BinauralIR direct_ir(const SourcePosition& p, int rate) const = 0;
};

class SphericalHeadSource final : public IrSource {
 public:
  explicit SphericalHeadSource(HeadModel head) : head_(head) {}
  BinauralIR direct_ir(const SourcePosition& p, int rate) const override;

 private:
  HeadModel head_;
};

// Externally measured impulse responses: a directory holding manifest.csv
// (header `file,azimuth_deg,elevation_deg,distance_m`) and one stereo WAV
// per row. Lookup returns the nearest measured direction, ties broken by
// log-distance.
class MeasuredIrSet final : public IrSource {
 public:
  static MeasuredIrSet load(const std::filesystem::path& dir);
  BinauralIR direct_ir(const SourcePosition& p, int rate) const override;
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    SourcePosition position;
    BinauralPair pair;
  };
  std::vector<Entry> entries_;
};

// rule * log2(distance / reference).
double distance_gain_db(double distance_m, double reference_m,
                        double rule_db_per_doubling);

// Per-band synthesis parameters of the reverberation tail, calibrated so
// that octave-band analysis of the synthesized tail recovers the room's T30
// targets (compensating leakage between neighbouring bands) and, when
// given, the broadband T30.
struct TailDesign {
  std::vector<double> band_lo_hz;
  std::vector<double> band_hi_hz;
  std::vector<double> synthesis_t30_s;
  std::vector<double> band_energy;  // sums to 1
  std::vector<double> coherence;    // diffuse-field interaural target
  double spectral_tilt = 1.0;       // band energy ~ (fc / 1 kHz)^tilt
  double duration_s = 0.0;
  int sample_rate_hz = 0;
  double reference_direct_energy = 1.0;  // frontal direct path, per ear
};

TailDesign design_tail(const RoomAcoustics& room, const HeadModel& head,
                       int rate, double duration_s);

// Diffuse decaying tail. Each octave band is constant-envelope band noise
// shaped by exp(-6.908 t / T30); the ears take the sum and the difference
// of two orthogonal such sources, so their zero-lag correlation equals
// sinc(2 pi f d / c). Energy per ear sits tail_level_db_at_reference
// relative to the frontal direct path at the reference distance.
// Throws InputError when duration < max T30.
BinauralPair synth_reverb_tail(const RoomAcoustics& room,
                               const HeadModel& head, int rate,
                               double duration_s, Rng& rng);
BinauralPair synth_reverb_tail(const TailDesign& design,
                               const RoomAcoustics& room, int rate, Rng& rng);
// The same tail split into its synthesis bands (their sum is the tail).
std::vector<BinauralPair> synth_reverb_tail_bands(const TailDesign& design,
                                                  const RoomAcoustics& room,
                                                  int rate, Rng& rng);

struct Rendered {
  BinauralPair pair;
  double headroom_gain = 1.0;  // applied scale, < 1 only if the mix clipped
  std::size_t direct_onset = 0;
};

// Direct path: convolution with the IR scaled by the direct distance rule.
// With a tail, the tail (scaled by the reverberant rule) starts at the
// direct arrival. Both rules are relative to room.reference_distance_m; the
// anechoic case uses the default rules. When normalize_headroom is set and
// the peak exceeds 1, both ears are scaled down together.
Rendered render_with_ir(const SampledSignal& signal, const BinauralIR& direct,
                        const RoomAcoustics* room, const BinauralPair* tail,
                        bool normalize_headroom = true);
Rendered render(const SampledSignal& signal, const SourcePosition& p,
                const HeadModel& head, const RoomAcoustics* room, Rng& rng,
                double tail_duration_s = 1.0);

// Schroeder backward integration, in dB re the total energy.
std::vector<double> schroeder_curve_db(std::span<const double> ir);
// T30: line fit over -5..-35 dB, extrapolated to 60 dB. EDT: 0..-10 dB.
// Throw NumericError when the decay spans less than the fit range or the
// noise floor sits less than 35 dB below the peak.
double estimate_t30(std::span<const double> ir_band, int rate);
double estimate_edt(std::span<const double> ir_band, int rate);

// Linear convolution; direct SIMD form for short kernels, FFT otherwise.
std::vector<double> convolve(std::span<const double> x,
                             std::span<const double> h);

}  // namespace bincue
