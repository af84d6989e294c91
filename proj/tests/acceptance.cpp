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


// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bincue/behavior.hpp"
#include "bincue/cli.hpp"
#include "bincue/cues.hpp"
#include "bincue/geometry.hpp"
#include "bincue/render.hpp"
#include "bincue/report.hpp"
#include "bincue/signals.hpp"
#include "bincue/stats.hpp"

using namespace bincue;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = BINCUE_FIXTURES;
constexpr int kRate = 48000;
constexpr double kSampleUs = 1e6 / kRate;

// Collects failed conditions of one criterion.
struct Check {
  std::vector<std::string> failures;
  std::string detail;
  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok) ++failed;
  }
  int failed = 0;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

int g_failed = 0;

void criterion(int id, const std::string& title, double budget_s,
               const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0) c.expect(dt < budget_s, fmt("runtime %.1f s over %.0f s", dt, budget_s));
  const bool ok = c.failed == 0;
  if (!ok) ++g_failed;
  std::printf("%s  %2d  %s  [%.1f s]", ok ? "PASS" : "FAIL", id, title.c_str(), dt);
  if (!c.detail.empty()) std::printf("  %s", c.detail.c_str());
  std::printf("\n");
  for (const auto& f : c.failures) std::printf("          - %s\n", f.c_str());
  std::fflush(stdout);
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * (i + j) + 1;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += rx[i] / n, my += ry[i] / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

using CueKey = std::tuple<double, double, Condition>;

std::map<CueKey, CueSet> index_table(const CueTable& t) {
  std::map<CueKey, CueSet> m;
  for (const auto& r : t.rows) m[{r.azimuth_deg, r.distance_m, r.condition}] = r.cues;
  return m;
}

// ---------------------------------------------------------------- 1

void coordinates(Check& c) {
  const auto p = spherical_to_interaural(make_spherical(90, 45));
  c.expect(p.lateral_deg == 45.0 && p.polar_deg == 90.0,
           fmt("(90, 45) -> (%.17g, %.17g)", p.lateral_deg, p.polar_deg));
  Rng g(1);
  std::uniform_real_distribution<double> az(-180, 180), el(-89.9, 89.9);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto d = make_spherical(az(g), el(g));
    const auto back = interaural_to_spherical(spherical_to_interaural(d));
    double daz = std::abs(back.azimuth_deg - d.azimuth_deg);
    daz = std::min(daz, 360 - daz);
    worst = std::max({worst, daz, std::abs(back.elevation_deg - d.elevation_deg)});
  }
  c.expect(worst < 1e-9, fmt("round trip error %.3g deg", worst));
  c.detail = fmt("(90,45)->(%g,%g), round trip max %.2g deg", p.lateral_deg, p.polar_deg, worst);
}

// ---------------------------------------------------------------- 2

void identities(Check& c) {
  Rng g(2);
  const auto x = white_burst(g);
  const BinauralPair p{x, x};
  const double ia = iacc(p), it = itd_maxiacce(p), il = ild_erb(p).mean_db;
  c.expect(std::abs(ia - 1.0) <= 1e-6, fmt("IACC %.9f", ia));
  c.expect(std::abs(it) <= kSampleUs, fmt("ITD %.3f us", it));
  c.expect(std::abs(il) <= 0.01, fmt("ILD %.4f dB", il));
  c.detail = fmt("IACC %.9f, ITD %.3f us, ILD %.4f dB", ia, it, il);
}

// ---------------------------------------------------------------- 3

void itd_physics(Check& c) {
  const HeadModel head;
  const double far = itd_maxiacce(spherical_head_ir(head, make_position(90, 0, 20.0), kRate));
  c.expect(std::abs(far - 656) <= 30, fmt("ITD(90 deg, 20 m) = %.1f us", far));
  double anti = 0, spread = 0;
  const std::vector<double> dists{0.5, 1.0, 1.5, 2.0};
  for (double a : sweep_azimuths(5)) {
    std::vector<double> v;
    for (double d : dists) {
      const double p = itd_maxiacce(spherical_head_ir(head, make_position(a, 0, d), kRate));
      const double m = itd_maxiacce(spherical_head_ir(head, make_position(-a, 0, d), kRate));
      anti = std::max(anti, std::abs(p + m));
      v.push_back(p);
    }
    spread = std::max(spread, *std::max_element(v.begin(), v.end()) -
                                  *std::min_element(v.begin(), v.end()));
  }
  c.expect(anti <= kSampleUs, fmt("antisymmetry residual %.2f us", anti));
  c.expect(spread <= kSampleUs, fmt("ITD spread over distance %.2f us", spread));
  c.detail = fmt("ITD(90) %.1f us, antisymmetry %.2f us, distance spread %.2f us", far, anti,
                 spread);
}

// ---------------------------------------------------------------- 4, 5, 7

CueTable g_sweep;

void coherence(Check& c) {
  const HeadModel head;
  const auto room = RoomAcoustics::table_defaults();
  const SphericalHeadSource src(head);
  SweepConfig cfg;
  g_sweep = cue_sweep(src, head, room, cfg, 42);
  c.expect(g_sweep.rows.size() == 576, fmt("%.0f rows", g_sweep.rows.size()));
  double an = 0, rv = 0;
  int na = 0, nr = 0;
  for (const auto& r : g_sweep.rows) {
    if (r.condition == Condition::kAnechoic) an += r.cues.iacc, ++na;
    else rv += r.cues.iacc, ++nr;
  }
  an /= na;
  rv /= nr;
  c.expect(an - rv >= 0.3, fmt("mean IACC anechoic %.3f, reverberant %.3f", an, rv));
  const auto m = index_table(g_sweep);
  double worst = -1;
  for (double a : sweep_azimuths(cfg.azimuth_step_deg)) {
    std::vector<double> v;
    for (double d : cfg.distances_m) v.push_back(m.at({a, d, Condition::kReverberant}).iacc);
    const double rho = spearman(cfg.distances_m, v);
    worst = std::max(worst, rho);
    c.expect(rho < -0.9, fmt("azimuth %.0f: Spearman %.2f", a, rho));
  }
  c.detail = fmt("mean IACC %.3f vs %.3f, worst Spearman %.2f", an, rv, worst);
}

void ild_distance(Check& c) {
  c.expect(g_sweep.rows.size() == 576, "sweep table unavailable");
  if (g_sweep.rows.empty()) return;
  const auto m = index_table(g_sweep);
  int near_far = 0, above = 0;
  double worst_excess = -1e9;
  for (double a : sweep_azimuths(5)) {
    if (std::abs(a) >= 60 && std::abs(a) <= 120) {
      const double n = std::abs(m.at({a, 0.5, Condition::kAnechoic}).ild_db);
      const double f = std::abs(m.at({a, 2.0, Condition::kAnechoic}).ild_db);
      ++near_far;
      c.expect(n > f, fmt("azimuth %.0f: |ILD| 0.5 m %.2f <= 2 m %.2f", a, n, f));
    }
    for (double d : {0.5, 1.0, 1.5, 2.0}) {
      const double an = std::abs(m.at({a, d, Condition::kAnechoic}).ild_db);
      const double rv = std::abs(m.at({a, d, Condition::kReverberant}).ild_db);
      worst_excess = std::max(worst_excess, rv - an);
      if (rv > an + 1.0) ++above;
      c.expect(rv <= an + 1.0, fmt("azimuth %.0f, %.1f m: reverberant |ILD| exceeds by %.2f dB",
                                   a, d, rv - an));
    }
  }
  c.detail = fmt("%.0f near/far azimuths, max reverberant excess %.2f dB, %.0f violations",
                 near_far, worst_excess, above);
}

void normalization(Check& c) {
  c.expect(g_sweep.rows.size() == 576, "sweep table unavailable");
  if (g_sweep.rows.empty()) return;
  const auto m = index_table(g_sweep);
  const auto norm = index_table(normalize_ild(g_sweep));
  std::string d;
  for (double dist : {0.5, 1.0, 1.5, 2.0}) {
    double raw = 0, nrm = 0;
    int n = 0;
    for (double a : sweep_azimuths(5)) {
      const double ref = m.at({a, 0.5, Condition::kAnechoic}).ild_db;
      const double r = m.at({a, dist, Condition::kReverberant}).ild_db;
      const double q = norm.at({a, dist, Condition::kReverberant}).ild_db;
      raw += (r - ref) * (r - ref);
      nrm += (q - ref) * (q - ref);
      ++n;
    }
    raw = std::sqrt(raw / n);
    nrm = std::sqrt(nrm / n);
    c.expect(nrm < raw, fmt("%.1f m: normalized %.2f dB vs raw %.2f dB", dist, nrm, raw));
    d += fmt("%.1fm %.2f<%.2f ", dist, nrm, raw);
  }
  c.detail = "RMS normalized<raw dB: " + d;
}

// ---------------------------------------------------------------- 6

void tail_roundtrip(Check& c) {
  const HeadModel head;
  const auto room = RoomAcoustics::table_defaults();
  const auto design = design_tail(room, head, kRate, 1.0);
  double worst = 0;
  for (std::uint64_t seed : {42u, 7u, 1234u}) {
    Rng g(seed);
    const auto tail = synth_reverb_tail(design, room, kRate, g);
    for (const SampledSignal* ear : {&tail.left, &tail.right}) {
      const auto bands = octave_filterbank(*ear, room.band_centers_hz, FilterEdge::kZero);
      for (std::size_t k = 0; k < bands.size(); ++k) {
        const double t = estimate_t30(bands[k].samples, kRate);
        const double err = std::abs(t / room.t30_s[k] - 1);
        worst = std::max(worst, err);
        c.expect(err <= 0.10, fmt("%.1f Hz: T30 %.3f s vs %.3f s", room.band_centers_hz[k], t,
                                  room.t30_s[k]));
      }
      const double bb = estimate_t30(ear->samples, kRate);
      const double target = room.broadband_t30_s.value_or(0.581);
      const double err = std::abs(bb / target - 1);
      worst = std::max(worst, err);
      c.expect(err <= 0.10, fmt("broadband T30 %.3f s vs %.3f s", bb, target));
    }
  }
  c.detail = fmt("worst relative T30 error %.1f%% over 3 seeds, both ears", 100 * worst);
}

// ---------------------------------------------------------------- 8

double brute_lateral(const DirectionSpherical& d) {
  const Vec3 v = unit_vector(d);
  return std::asin(std::clamp(v.y, -1.0, 1.0)) * 180 / std::numbers::pi;
}

// Undefined at the lateral poles, where it is taken as 0.
double brute_polar(const DirectionSpherical& d) {
  const Vec3 v = unit_vector(d);
  if (std::hypot(v.x, v.z) < 1e-12) return 0.0;
  return std::atan2(v.z, v.x) * 180 / std::numbers::pi;
}

double wrap180(double x) {
  double r = std::fmod(x + 180, 360);
  if (r < 0) r += 360;
  return r - 180;
}

void behaviour_oracle(Check& c) {
  const auto log = parse_trial_log(kFixtures + "/trials.csv",
                                   std::optional<fs::path>(kFixtures + "/poses.csv"));
  c.expect(log.trials.size() == 360, fmt("%.0f trials", log.trials.size()));
  const auto got = localisation_summary(log.trials, GroupBy::kConditionDistance);

  // Brute force straight from the definitions.
  struct Acc {
    std::vector<double> lat, pol;
    int eligible = 0, qe = 0, n = 0;
  };
  std::map<std::pair<Condition, double>, Acc> groups;
  for (const auto& t : log.trials) {
    auto& a = groups[{t.condition, std::round(t.target.distance_m * 10) / 10}];
    ++a.n;
    const double tl = brute_lateral(t.target.direction);
    const double lat_err = brute_lateral(t.response) - tl;
    const double pol_err = wrap180(brute_polar(t.response) - brute_polar(t.target.direction));
    a.lat.push_back(lat_err);
    const double w = 0.5 * std::cos(2 * tl * std::numbers::pi / 180) + 0.5;
    const bool eligible = std::abs(tl) <= 60;
    const bool qe = eligible && std::abs(pol_err) * w > 45;
    a.eligible += eligible;
    a.qe += qe;
    if (!qe) a.pol.push_back(pol_err);
  }
  auto sd = [](const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x / v.size();
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (v.size() - 1));
  };
  auto mean_abs = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += std::abs(x);
    return s / v.size();
  };
  c.expect(got.size() == groups.size(), "group count");
  double worst = 0;
  auto close = [&](const std::optional<double>& a, double b, const std::string& what) {
    c.expect(a.has_value(), what + " missing");
    if (!a) return;
    worst = std::max(worst, std::abs(*a - b));
    c.expect(std::abs(*a - b) <= 1e-9, what + fmt(" differs by %.3g", std::abs(*a - b)));
  };
  std::size_t i = 0;
  for (const auto& [key, a] : groups) {
    if (i >= got.size()) break;
    const auto& s = got[i++];
    c.expect(s.condition == key.first && s.distance_m && *s.distance_m == key.second,
             "group order");
    c.expect(s.n_trials == static_cast<std::size_t>(a.n), "n_trials");
    c.expect(s.n_eligible == static_cast<std::size_t>(a.eligible), "n_eligible");
    c.expect(s.n_polar == a.pol.size(), "n_polar");
    c.expect(s.n_polar == s.n_trials - static_cast<std::size_t>(a.qe),
             "polar metrics include a quadrant error");
    close(s.lateral_precision_deg, sd(a.lat), "lateral precision");
    close(s.lateral_accuracy_deg, mean_abs(a.lat), "lateral accuracy");
    close(s.polar_precision_deg, sd(a.pol), "polar precision");
    close(s.polar_accuracy_deg, mean_abs(a.pol), "polar accuracy");
    close(s.quadrant_error_rate_pct, 100.0 * a.qe / a.eligible, "QE rate");
  }

  // The independent Python recomputation agrees as well.
  std::ifstream in(kFixtures + "/expected_localisation.csv");
  const auto want = read_localisation_csv(in);
  c.expect(want.size() == got.size(), "oracle row count");
  for (std::size_t k = 0; k < std::min(want.size(), got.size()); ++k) {
    c.expect(want[k].n_polar == got[k].n_polar, "oracle n_polar");
    close(got[k].polar_accuracy_deg, *want[k].polar_accuracy_deg, "oracle polar accuracy");
    close(got[k].lateral_precision_deg, *want[k].lateral_precision_deg,
          "oracle lateral precision");
    close(got[k].quadrant_error_rate_pct, *want[k].quadrant_error_rate_pct, "oracle QE rate");
  }

  // Moving every quadrant-error response elsewhere in the back leaves the
  // polar metrics untouched.
  auto moved = log.trials;
  int n_moved = 0;
  for (auto& t : moved) {
    if (!is_quadrant_error(t)) continue;
    auto alt = t;
    alt.response = make_spherical(wrap_azimuth(180 - t.target.direction.azimuth_deg + 3),
                                  t.response.elevation_deg);
    if (is_quadrant_error(alt)) t = alt, ++n_moved;
  }
  const auto after = localisation_summary(moved, GroupBy::kConditionDistance);
  for (std::size_t k = 0; k < after.size(); ++k) {
    c.expect(after[k].polar_precision_deg == got[k].polar_precision_deg &&
                 after[k].polar_accuracy_deg == got[k].polar_accuracy_deg,
             "polar metrics changed when quadrant-error responses moved");
  }
  c.detail = fmt("6 groups, max deviation %.2g, %.0f quadrant-error responses moved", worst,
                 n_moved);
}

// ---------------------------------------------------------------- 9

std::vector<HeadPoseSample> trace(double dur, const std::function<double(double)>& yaw) {
  std::vector<HeadPoseSample> out;
  for (int i = 0; i < static_cast<int>(dur * 90); ++i) {
    const double t = i / 90.0;
    out.push_back({t, yaw(t), 0, 0, true});
  }
  return out;
}

void kinematics(Check& c) {
  double rom_err = 0;
  for (double amp : {5.0, 10.0, 37.5}) {
    TrialRecord t;
    t.poses = trace(1.6, [&](double s) { return amp * std::sin(2 * std::numbers::pi * s / 1.6); });
    const double r = rom(t);
    rom_err = std::max(rom_err, std::abs(r - amp));
    c.expect(std::abs(r - amp) <= 0.1, fmt("ROM %.3f for amplitude %.1f", r, amp));
  }
  auto step = [](double amp) {
    return [amp](double t) {
      if (t < 0.5) return 0.0;
      if (t > 0.9) return amp;
      return 0.5 * amp * (1 - std::cos(std::numbers::pi * (t - 0.5) / 0.4));
    };
  };
  const auto base = movement_onset(trace(2.0, step(30)));
  c.expect(base.onset_s && std::abs(*base.onset_s - 0.5) <= 2 / 90.0, "step onset");
  double shift = 0;
  for (double amp : {60.0, 15.0, 300.0}) {
    const auto o = movement_onset(trace(2.0, step(amp)));
    c.expect(o.onset_s.has_value(), "no onset after scaling");
    if (o.onset_s && base.onset_s) {
      shift = std::max(shift, std::abs(*o.onset_s - *base.onset_s));
      c.expect(std::abs(*o.onset_s - *base.onset_s) <= 1 / 90.0,
               fmt("amplitude %.0f moves onset to %.4f s", amp, *o.onset_s));
    }
  }
  int spurious = 0;
  for (int seed = 0; seed < 50; ++seed) {
    Rng g(seed);
    std::normal_distribution<double> jitter(0, 0.005);
    if (movement_onset(trace(2.0, [&](double) { return jitter(g); })).onset_s) ++spurious;
  }
  c.expect(spurious == 0, fmt("%.0f static trials with an onset", spurious));
  c.detail = fmt("ROM error %.3f deg, onset %.4f s, scaling shift %.4f s",
                 rom_err, base.onset_s.value_or(-1), shift);
}

// ---------------------------------------------------------------- 10

void stats_calibration(Check& c) {
  Rng g(10);
  std::normal_distribution<double> nd(0, 1);
  double worst_p = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const int total = rep % 2 ? 12 : 13;
    std::vector<double> a(total / 2), b(total - total / 2);
    for (auto& v : a) v = nd(g);
    for (auto& v : b) v = nd(g) + 0.6;
    const double d = std::abs(rank_sum(a, b, RankSumMethod::kExact).p_value -
                              rank_sum(a, b, RankSumMethod::kNormal).p_value);
    worst_p = std::max(worst_p, d);
  }
  c.expect(worst_p < 0.02, fmt("exact vs normal p differ by %.4f", worst_p));

  std::lognormal_distribution<double> ln(0, 0.8);
  int grid_violations = 0;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x(30 + rep);
    for (auto& v : x) v = ln(g) * (1 + rep);
    const auto r = box_cox(x);
    for (int k = -200; k <= 200; ++k)
      if (box_cox_log_likelihood(x, k / 100.0) > r.log_likelihood) ++grid_violations;
  }
  c.expect(grid_violations == 0, fmt("%.0f grid points beat the Box-Cox maximum",
                                     grid_violations));

  std::uniform_real_distribution<double> u(0, 60);
  std::vector<double> rom(40), cond(40), y(40);
  const std::array<double, 4> truth{12.5, -0.31, 6.0, 0.42};
  for (std::size_t i = 0; i < rom.size(); ++i) {
    rom[i] = u(g);
    cond[i] = i % 2;
    y[i] = truth[0] + truth[1] * rom[i] + truth[2] * cond[i] + truth[3] * rom[i] * cond[i];
  }
  const auto fit = ols_interaction(y, rom, cond);
  double coef_err = 0;
  for (int k = 0; k < 4; ++k)
    coef_err = std::max(coef_err, std::abs(fit.coefficients[k] - truth[k]));
  c.expect(coef_err <= 1e-9, fmt("coefficient error %.3g", coef_err));
  c.detail = fmt("max p difference %.4f, grid violations %.0f, OLS error %.2g", worst_p,
                 grid_violations, coef_err);
}

// ---------------------------------------------------------------- 11

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bincue");
  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  std::ostringstream out, err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

void determinism(Check& c) {
  const auto dir = fs::temp_directory_path() / "bincue_acceptance";
  fs::remove_all(dir);
  for (const char* run : {"a", "b"}) {
    const std::string out = (dir / run).string();
    c.expect(cli({"--seed", "42", "--out", out, "--quiet", "sweep", "--threads",
                  run[0] == 'a' ? "1" : "3"}) == 0,
             "sweep failed");
    c.expect(cli({"--seed", "42", "--out", out, "--quiet", "behavior", "--trials",
                  kFixtures + "/trials.csv", "--poses", kFixtures + "/poses.csv"}) == 0,
             "behavior failed");
  }
  int files = 0;
  for (const char* f : {"cues.csv", "cues_normalized.csv", "localisation.csv",
                        "subject_condition.csv", "rom.csv", "onsets.csv", "rejects.csv"}) {
    const auto a = slurp(dir / "a" / f), b = slurp(dir / "b" / f);
    c.expect(!a.empty() && a == b, std::string(f) + " differs between runs");
    ++files;
  }
  fs::remove_all(dir);
  c.detail = fmt("%.0f CSVs compared byte for byte (sweep with 1 and 3 threads)", files);
}

}  // namespace

int main() {
  criterion(1, "coordinate fidelity", 1, coordinates);
  criterion(2, "cue identities", 1, identities);
  criterion(3, "ITD physics", 30, itd_physics);
  criterion(4, "reverberation lowers coherence", 120, coherence);
  criterion(5, "distance effect on ILD", 0, ild_distance);
  criterion(6, "reverberation synthesis round trip", 60, tail_roundtrip);
  criterion(7, "ILD normalization", 0, normalization);
  criterion(8, "behavioural metrics oracle", 0, behaviour_oracle);
  criterion(9, "kinematics", 0, kinematics);
  criterion(10, "statistics calibration", 0, stats_calibration);
  criterion(11, "determinism", 0, determinism);
  std::printf("%d of 11 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
