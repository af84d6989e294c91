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


#include "bincue/cues.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <tuple>

#include "bincue/error.hpp"
#include "bincue/geometry.hpp"
#include "csv.hpp"

namespace bincue {
namespace {

constexpr std::uint64_t kBurstKey = 0xB0257;
constexpr std::uint64_t kTailKey = 0x7A11;
constexpr int kRefineSteps = 32;  // sub-lag grid for the IACC peak
constexpr int kInterpHalf = 16;
constexpr double kPi = std::numbers::pi;

int lag_samples(double max_lag_ms, int rate) {
  if (!(max_lag_ms > 0)) throw InputError("max lag must be positive");
  return static_cast<int>(std::lround(max_lag_ms * 1e-3 * rate));
}

}  // namespace

void CueTable::validate() const {
  std::set<std::tuple<double, double, Condition>> keys;
  for (const CueRow& r : rows) {
    const CueSet& c = r.cues;
    if (!std::isfinite(c.itd_us) || !std::isfinite(c.ild_db) ||
        !std::isfinite(c.iacc) || !std::isfinite(r.azimuth_deg) ||
        !std::isfinite(r.distance_m))
      throw NumericError("cue table holds a non-finite value");
    if (c.iacc < 0 || c.iacc > 1) throw NumericError("iacc outside [0, 1]");
    if (!keys.emplace(r.azimuth_deg, r.distance_m, r.condition).second)
      throw InputError("duplicate cue table key");
  }
}

double iacc(const BinauralPair& pair, double max_lag_ms) {
  pair.validate();
  const XCorr xc = normalized_xcorr(pair.left, pair.right,
                                    lag_samples(max_lag_ms,
                                                pair.sample_rate_hz()));
  const auto& v = xc.values;
  std::size_t k = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[k])) k = i;
  double best = std::abs(v[k]);
  // The correlation of band-limited signals is itself band-limited; look
  // between lags with windowed-sinc interpolation so a fractional-sample
  // interaural delay does not lower the peak.
  const auto n = static_cast<long>(v.size());
  const long kk = static_cast<long>(k);
  for (int s = -kRefineSteps + 1; s < kRefineSteps; ++s) {
    if (s == 0) continue;
    const double tau = kk + static_cast<double>(s) / kRefineSteps;
    if (tau < 0 || tau > n - 1) continue;
    double acc = 0;
    for (long j = std::max(0L, kk - kInterpHalf);
         j <= std::min(n - 1, kk + kInterpHalf); ++j) {
      const double x = tau - static_cast<double>(j);
      const double w = 0.5 + 0.5 * std::cos(kPi * x / (kInterpHalf + 1));
      const double sinc = std::sin(kPi * x) / (kPi * x);
      acc += v[static_cast<std::size_t>(j)] * sinc * w;
    }
    best = std::max(best, std::abs(acc));
  }
  return std::min(best, 1.0);
}

double itd_maxiacce(const BinauralPair& pair, double max_lag_ms) {
  pair.validate();
  const int rate = pair.sample_rate_hz();
  const SampledSignal l = envelope(lowpass(pair.left, 3000.0, FilterEdge::kZero));
  const SampledSignal r =
      envelope(lowpass(pair.right, 3000.0, FilterEdge::kZero));
  const XCorr xc = normalized_xcorr(l, r, lag_samples(max_lag_ms, rate));
  const auto& v = xc.values;
  std::size_t k = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[k]) k = i;
  double lag = xc.lags[k];
  if (k > 0 && k + 1 < v.size()) {
    const double den = v[k - 1] - 2 * v[k] + v[k + 1];
    if (den < 0) lag += 0.5 * (v[k - 1] - v[k + 1]) / den;
  }
  return lag / rate * 1e6 + 0.0;
}

IldResult ild_erb(const BinauralPair& pair, const IldOptions& opt) {
  pair.validate();
  const SampledSignal l = highpass(pair.left, opt.highpass_hz, FilterEdge::kZero);
  const SampledSignal r =
      highpass(pair.right, opt.highpass_hz, FilterEdge::kZero);
  const auto el = erb_band_energies(l, opt.n_bands, opt.lo_hz, opt.hi_hz);
  const auto er = erb_band_energies(r, opt.n_bands, opt.lo_hz, opt.hi_hz);
  IldResult out;
  double sum = 0;
  for (std::size_t k = 0; k < el.size(); ++k) {
    if (!(el[k] > 0) || !(er[k] > 0))
      throw NumericError("zero energy in ERB band " + std::to_string(k));
    const double d = 10.0 * std::log10(el[k] / er[k]);
    out.per_band_db.push_back(d);
    sum += d;
  }
  out.mean_db = sum / static_cast<double>(el.size()) + 0.0;
  return out;
}

std::vector<double> sweep_azimuths(double step_deg) {
  if (!(step_deg > 0) || step_deg > 360 || !std::isfinite(step_deg))
    throw InputError("azimuth step must be in (0, 360]");
  std::vector<double> az;
  for (int k = 0;; ++k) {
    const double a = -180.0 + k * step_deg;
    if (a >= 180.0 - 1e-9) break;
    az.push_back(a + 0.0);
  }
  return az;
}

CueTable cue_sweep(const IrSource& source, const HeadModel& head,
                   const RoomAcoustics& room, const SweepConfig& cfg,
                   std::uint64_t seed) {
  head.validate();
  room.validate();
  const int rate = cfg.sample_rate_hz;
  if (rate <= 0) throw InputError("sample rate must be positive");
  if (cfg.distances_m.empty()) throw InputError("no sweep distances");
  for (double d : cfg.distances_m)
    if (!(d > 0) || !std::isfinite(d))
      throw InputError("sweep distances must be positive");
  if (cfg.conditions.empty()) throw InputError("no sweep conditions");
  if (!(cfg.burst_s > 0)) throw InputError("burst duration must be positive");
  const auto az = sweep_azimuths(cfg.azimuth_step_deg);

  Rng burst_rng(derive_seed(seed, {kBurstKey}));
  const SampledSignal burst = white_burst(burst_rng, rate, cfg.burst_s);
  const bool any_reverb =
      std::find(cfg.conditions.begin(), cfg.conditions.end(),
                Condition::kReverberant) != cfg.conditions.end();
  std::optional<TailDesign> design;
  if (any_reverb) design = design_tail(room, head, rate, cfg.tail_duration_s);

  const std::size_t na = az.size(), nd = cfg.distances_m.size();
  const std::size_t total = cfg.conditions.size() * nd * na;
  CueTable table;
  table.rows.resize(total);

  auto run_row = [&](std::size_t idx) {
    const std::size_t ai = idx % na;
    const std::size_t di = (idx / na) % nd;
    const Condition cond = cfg.conditions[idx / (na * nd)];
    const SourcePosition pos =
        make_position(az[ai], cfg.elevation_deg, cfg.distances_m[di]);
    BinauralIR ir = source.direct_ir(pos, rate);
    ir.position.distance_m = pos.distance_m;
    Rendered out;
    if (cond == Condition::kReverberant) {
      Rng rng(derive_seed(seed, {kTailKey, ai}));
      const BinauralPair tail = synth_reverb_tail(*design, room, rate, rng);
      ir.condition = cond;
      out = render_with_ir(burst, ir, &room, &tail);
    } else {
      out = render_with_ir(burst, ir, &room, nullptr);
    }
    CueRow& row = table.rows[idx];
    row.azimuth_deg = az[ai];
    row.distance_m = cfg.distances_m[di];
    row.condition = cond;
    row.cues.iacc = iacc(out.pair);
    const IldResult ild = ild_erb(out.pair, cfg.ild);
    row.cues.ild_db = ild.mean_db;
    row.cues.per_band_ild_db = ild.per_band_db;
    row.cues.itd_us = itd_maxiacce(ir);
  };

  unsigned nthreads = cfg.threads ? cfg.threads
                                  : std::max(1u, std::thread::hardware_concurrency());
  nthreads = static_cast<unsigned>(std::min<std::size_t>(nthreads, total));
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < total; ++i) run_row(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < total;) {
          try {
            run_row(i);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next = total;
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }
  table.validate();
  return table;
}

CueTable normalize_ild(const CueTable& table) {
  CueTable out = table;
  for (CueRow& r : out.rows) {
    if (!(r.cues.iacc > 0))
      throw NumericError("cannot normalize ILD: row with iacc = 0 at azimuth " +
                         csv::format(r.azimuth_deg));
    r.cues.ild_db /= r.cues.iacc;
  }
  return out;
}

static constexpr const char* kCueHeader =
    "azimuth_deg,distance_m,condition,itd_us,ild_db,iacc";

void write_cue_csv(std::ostream& out, const CueTable& table) {
  out << kCueHeader << '\n';
  for (const CueRow& r : table.rows) {
    out << csv::format(r.azimuth_deg) << ',' << csv::format(r.distance_m)
        << ',' << condition_name(r.condition) << ','
        << csv::format(r.cues.itd_us) << ',' << csv::format(r.cues.ild_db)
        << ',' << csv::format(r.cues.iacc) << '\n';
  }
}

CueTable read_cue_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("cue CSV: empty file");
  csv::check_header(line, kCueHeader, "cue CSV");
  CueTable t;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (csv::trim(line).empty()) continue;
    const auto f = csv::split(line);
    const std::string where = "cue CSV line " + std::to_string(lineno);
    if (f.size() != 6) throw InputError(where + ": expected 6 fields");
    CueRow r;
    auto number = [&](std::size_t i, const char* column) {
      const auto v = csv::parse_double(f[i]);
      if (!v) throw InputError(where + ": malformed " + column);
      return *v;
    };
    r.azimuth_deg = number(0, "azimuth_deg");
    r.distance_m = number(1, "distance_m");
    const double itd = number(3, "itd_us");
    const double ild = number(4, "ild_db");
    const double ia = number(5, "iacc");
    if (ia < 0 || ia > 1) throw InputError(where + ": iacc outside [0, 1]");
    try {
      r.condition = parse_condition(csv::trim(f[2]));
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
    r.cues = {itd, ild, ia, {}};
    t.rows.push_back(std::move(r));
  }
  try {
    t.validate();
  } catch (const std::exception& e) {
    throw InputError(std::string("cue CSV: ") + e.what());
  }
  return t;
}

}  // namespace bincue
