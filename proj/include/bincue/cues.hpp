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

// Binaural cue extraction (IACC, ITD, ILD), the azimuth x distance sweep
// and ILD/IACC divisive normalization.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "bincue/condition.hpp"
#include "bincue/render.hpp"
#include "bincue/signals.hpp"

namespace bincue {

struct CueSet {
  double itd_us = 0.0;  // positive when the left ear leads
  double ild_db = 0.0;  // positive when the left ear is louder
  double iacc = 0.0;    // [0, 1]
  std::vector<double> per_band_ild_db;
};

struct CueRow {
  double azimuth_deg = 0.0;
  double distance_m = 0.0;
  Condition condition = Condition::kAnechoic;
  CueSet cues;
};

struct CueTable {
  std::vector<CueRow> rows;
  // Finite cues, iacc in [0, 1] and unique (azimuth, distance, condition).
  void validate() const;
};

// Peak |normalized cross-correlation| within +-max_lag_ms, with the peak
// refined between integer lags by band-limited interpolation.
double iacc(const BinauralPair& pair, double max_lag_ms = 1.0);

// Lag of the envelope cross-correlation peak after a 3 kHz low-pass,
// refined by a parabola through the peak and its neighbours. Microseconds,
// positive when the left ear leads.
double itd_maxiacce(const BinauralPair& pair, double max_lag_ms = 1.0);
inline double itd_maxiacce(const BinauralIR& ir) {
  return itd_maxiacce(ir.pair);
}

struct IldOptions {
  double highpass_hz = 1500.0;
  int n_bands = 30;
  double lo_hz = 1500.0;
  double hi_hz = 20000.0;
};

struct IldResult {
  double mean_db = 0.0;
  std::vector<double> per_band_db;
};

// Mean over ERB bands of 10 log10(E_left / E_right) after a high-pass.
IldResult ild_erb(const BinauralPair& pair, const IldOptions& opt = {});
inline IldResult ild_erb(const BinauralIR& ir, const IldOptions& opt = {}) {
  return ild_erb(ir.pair, opt);
}

struct SweepConfig {
  int sample_rate_hz = kDefaultSampleRate;
  double azimuth_step_deg = 5.0;
  std::vector<double> distances_m{0.5, 1.0, 1.5, 2.0};
  std::vector<Condition> conditions{Condition::kAnechoic,
                                    Condition::kReverberant};
  double burst_s = 0.1;
  double tail_duration_s = 1.0;
  double elevation_deg = 0.0;
  unsigned threads = 0;  // 0: hardware concurrency
  IldOptions ild;
};

// Azimuths -180, -180 + step, ... below 180.
std::vector<double> sweep_azimuths(double step_deg);

// Rows ordered by condition, distance, azimuth. One white burst is drawn
// from `seed`; reverberant rows draw their tail from a seed derived from
// (seed, azimuth index), shared across distances so the distance trend
// reflects only the direct-to-reverberant ratio. The table does not depend
// on thread count or evaluation order. ITD is measured on the direct-path
// IR, ILD and IACC on the rendered burst.
CueTable cue_sweep(const IrSource& source, const HeadModel& head,
                   const RoomAcoustics& room, const SweepConfig& cfg,
                   std::uint64_t seed);

// ild_db / iacc per row. Throws NumericError when a row has iacc = 0.
CueTable normalize_ild(const CueTable& table);

// Header `azimuth_deg,distance_m,condition,itd_us,ild_db,iacc`.
void write_cue_csv(std::ostream& out, const CueTable& table);
CueTable read_cue_csv(std::istream& in);

}  // namespace bincue
