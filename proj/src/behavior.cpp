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


#include "bincue/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include "bincue/error.hpp"
#include "bincue/signals.hpp"
#include "csv.hpp"

namespace bincue {
namespace {

// Sums in sorted order so aggregates do not depend on trial order.
double sorted_mean(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sorted_sd(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double s = 0;
  for (double x : v) s += x;
  const double mean = s / static_cast<double>(v.size());
  std::vector<double> sq;
  sq.reserve(v.size());
  for (double x : v) sq.push_back((x - mean) * (x - mean));
  std::sort(sq.begin(), sq.end());
  double ss = 0;
  for (double x : sq) ss += x;
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::vector<double> absolute(std::vector<double> v) {
  for (double& x : v) x = std::abs(x);
  return v;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

AngularErrors angular_errors(const DirectionSpherical& target,
                             const DirectionSpherical& response) {
  const DirectionInteraural t = spherical_to_interaural(target);
  const DirectionInteraural r = spherical_to_interaural(response);
  return {r.lateral_deg - t.lateral_deg + 0.0,
          wrap_polar_difference(r.polar_deg, t.polar_deg)};
}

double weighted_polar_error(double target_lateral_deg,
                            double polar_error_deg) {
  if (!(std::abs(target_lateral_deg) <= 90.0))
    throw InputError("target lateral angle outside [-90, 90]");
  const double w = 0.5 * cosd(2.0 * target_lateral_deg) + 0.5;
  return std::abs(polar_error_deg) * w;
}

bool quadrant_eligible(const TrialRecord& t) {
  return std::abs(spherical_to_interaural(t.target.direction).lateral_deg) <=
         kQuadrantLateralLimitDeg;
}

bool is_quadrant_error(const TrialRecord& t) {
  if (!quadrant_eligible(t)) return false;
  const double lat = spherical_to_interaural(t.target.direction).lateral_deg;
  const AngularErrors e = angular_errors(t.target.direction, t.response);
  return weighted_polar_error(lat, e.polar_deg) > kQuadrantErrorDeg;
}

double quadrant_error_rate(std::span<const TrialRecord> trials) {
  std::size_t eligible = 0, qe = 0;
  for (const TrialRecord& t : trials) {
    if (!quadrant_eligible(t)) continue;
    ++eligible;
    if (is_quadrant_error(t)) ++qe;
  }
  if (eligible == 0)
    throw InputError("no trials within +-60 deg lateral for quadrant errors");
  return 100.0 * static_cast<double>(qe) / static_cast<double>(eligible);
}

double distance_bin(double distance_m) {
  return std::round(distance_m * 10.0) / 10.0;
}

std::vector<LocalisationSummary> localisation_summary(
    std::span<const TrialRecord> trials, GroupBy group_by) {
  std::map<std::pair<Condition, double>, std::vector<const TrialRecord*>>
      groups;
  for (const TrialRecord& t : trials) {
    const double key = group_by == GroupBy::kConditionDistance
                           ? distance_bin(t.target.distance_m)
                           : 0.0;
    groups[{t.condition, key}].push_back(&t);
  }
  std::vector<LocalisationSummary> out;
  for (const auto& [key, members] : groups) {
    LocalisationSummary s;
    s.condition = key.first;
    if (group_by == GroupBy::kConditionDistance) s.distance_m = key.second;
    s.n_trials = members.size();
    std::vector<double> lat, pol;
    std::size_t qe = 0;
    for (const TrialRecord* t : members) {
      const AngularErrors e = angular_errors(t->target.direction, t->response);
      lat.push_back(e.lateral_deg);
      if (quadrant_eligible(*t)) ++s.n_eligible;
      if (is_quadrant_error(*t)) {
        ++qe;
      } else {
        pol.push_back(e.polar_deg);
      }
    }
    s.n_polar = pol.size();
    if (lat.size() >= 2) s.lateral_precision_deg = sorted_sd(lat);
    if (!lat.empty()) s.lateral_accuracy_deg = sorted_mean(absolute(lat));
    if (pol.size() >= 2) s.polar_precision_deg = sorted_sd(pol);
    if (!pol.empty()) s.polar_accuracy_deg = sorted_mean(absolute(pol));
    if (s.n_eligible > 0)
      s.quadrant_error_rate_pct = 100.0 * static_cast<double>(qe) /
                                  static_cast<double>(s.n_eligible);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<HeadPoseSample> stimulus_window(const TrialRecord& t) {
  std::vector<HeadPoseSample> w;
  for (const HeadPoseSample& p : t.poses)
    if (p.in_stimulus) w.push_back(p);
  return w;
}

double rom(const TrialRecord& t) {
  const auto w = stimulus_window(t);
  if (w.empty())
    throw InputError("trial " + t.trial_id + " has no stimulus-window poses");
  const double y0 = w.front().yaw_deg;
  double m = 0;
  for (const HeadPoseSample& p : w) m = std::max(m, std::abs(p.yaw_deg - y0));
  return m;
}

std::vector<SubjectRom> subject_rom(std::span<const TrialRecord> trials) {
  std::map<std::string, std::vector<double>> per;
  for (const TrialRecord& t : trials) {
    bool any = false;
    for (const HeadPoseSample& p : t.poses) any = any || p.in_stimulus;
    if (any) per[t.subject_id].push_back(rom(t));
  }
  std::vector<SubjectRom> out;
  for (auto& [id, v] : per) out.push_back({id, v.size(), sorted_mean(v)});
  return out;
}

OnsetResult movement_onset(std::span<const HeadPoseSample> poses,
                           const OnsetOptions& opt) {
  const std::size_t n = poses.size();
  if (n < 3) throw InputError("movement onset needs at least 3 pose samples");
  if (n < static_cast<std::size_t>(std::max(opt.sg_window, 0)))
    throw InputError("pose series shorter than the smoothing window");
  if (!(opt.threshold_fraction > 0 && opt.threshold_fraction < 1))
    throw InputError("onset threshold fraction must be in (0, 1)");
  if (!(opt.noise_floor_deg_s >= 0))
    throw InputError("onset noise floor must be >= 0");
  for (std::size_t i = 1; i < n; ++i)
    if (!(poses[i].t_s > poses[i - 1].t_s))
      throw InputError("pose timestamps must increase for onset detection");

  std::vector<double> v(n);
  v[0] = (poses[1].yaw_deg - poses[0].yaw_deg) / (poses[1].t_s - poses[0].t_s);
  v[n - 1] = (poses[n - 1].yaw_deg - poses[n - 2].yaw_deg) /
             (poses[n - 1].t_s - poses[n - 2].t_s);
  for (std::size_t i = 1; i + 1 < n; ++i)
    v[i] = (poses[i + 1].yaw_deg - poses[i - 1].yaw_deg) /
           (poses[i + 1].t_s - poses[i - 1].t_s);
  std::vector<double> speed = savitzky_golay(v, opt.sg_window, opt.sg_order);
  for (double& s : speed) s = std::abs(s);

  OnsetResult r;
  r.peak_speed_deg_s = *std::max_element(speed.begin(), speed.end());
  if (r.peak_speed_deg_s < opt.noise_floor_deg_s || r.peak_speed_deg_s == 0)
    return r;
  const double thr = opt.threshold_fraction * r.peak_speed_deg_s;
  bool above = false;
  for (std::size_t i = 0; i < n; ++i) {
    const bool now = speed[i] >= thr;
    if (now && !above) r.all_onsets_s.push_back(poses[i].t_s);
    above = now;
  }
  r.onset_s = r.all_onsets_s.front();
  return r;
}

// ---------------------------------------------------------------- logs

TrialLog parse_trial_log(std::istream& trials, std::istream* poses,
                         const std::string& trials_name,
                         const std::string& poses_name) {
  TrialLog log;
  std::string line;
  if (!std::getline(trials, line) || csv::trim(line).empty())
    throw InputError(trials_name + ": no trials");
  csv::check_header(line, kTrialsHeader, trials_name);
  std::unordered_map<std::string, std::size_t> index;
  int lineno = 1;
  auto reject = [&](const std::string& file, int ln, std::string why) {
    log.rejects.push_back({file, ln, std::move(why)});
  };
  while (std::getline(trials, line)) {
    ++lineno;
    line = strip_cr(line);
    if (csv::trim(line).empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != 8) {
      reject(trials_name, lineno,
             "expected 8 fields, got " + std::to_string(f.size()));
      continue;
    }
    TrialRecord t;
    t.trial_id = std::string(csv::trim(f[0]));
    t.subject_id = std::string(csv::trim(f[1]));
    if (t.trial_id.empty() || t.subject_id.empty()) {
      reject(trials_name, lineno, "empty trial_id or subject_id");
      continue;
    }
    if (index.count(t.trial_id)) {
      reject(trials_name, lineno, "duplicate trial_id " + t.trial_id);
      continue;
    }
    try {
      t.condition = parse_condition(csv::trim(f[2]));
      double num[5];
      static const char* names[5] = {"target_azimuth_deg",
                                     "target_elevation_deg",
                                     "target_distance_m", "response_yaw_deg",
                                     "response_pitch_deg"};
      for (int k = 0; k < 5; ++k) {
        const auto v = csv::parse_double(f[3 + k]);
        if (!v) throw InputError(std::string("malformed ") + names[k]);
        num[k] = *v;
      }
      t.target = make_position(num[0], num[1], num[2]);
      t.response = make_spherical(num[3], num[4]);
    } catch (const InputError& e) {
      reject(trials_name, lineno, e.what());
      continue;
    }
    index.emplace(t.trial_id, log.trials.size());
    log.trials.push_back(std::move(t));
  }

  if (!poses) return log;
  if (!std::getline(*poses, line) || csv::trim(line).empty()) return log;
  csv::check_header(line, kPosesHeader, poses_name);
  lineno = 1;
  bool any = false;
  while (std::getline(*poses, line)) {
    ++lineno;
    line = strip_cr(line);
    if (csv::trim(line).empty()) continue;
    any = true;
    const auto f = csv::split(line);
    if (f.size() != 6) {
      reject(poses_name, lineno,
             "expected 6 fields, got " + std::to_string(f.size()));
      continue;
    }
    const auto it = index.find(std::string(csv::trim(f[0])));
    if (it == index.end()) {
      reject(poses_name, lineno,
             "unknown trial_id " + std::string(csv::trim(f[0])));
      continue;
    }
    const auto t = csv::parse_double(f[1]);
    const auto yaw = csv::parse_double(f[2]);
    const auto pitch = csv::parse_double(f[3]);
    const auto roll = csv::parse_double(f[4]);
    const auto flag = csv::trim(f[5]);
    if (!t || !yaw || !pitch || !roll) {
      reject(poses_name, lineno, "malformed number");
      continue;
    }
    if (flag != "0" && flag != "1") {
      reject(poses_name, lineno, "in_stimulus must be 0 or 1");
      continue;
    }
    auto& series = log.trials[it->second].poses;
    if (!series.empty() && *t < series.back().t_s) {
      reject(poses_name, lineno, "timestamp decreases within trial");
      continue;
    }
    series.push_back({*t, *yaw, *pitch, *roll, flag == "1"});
  }
  log.has_kinematics = any;
  return log;
}

TrialLog parse_trial_log(const std::filesystem::path& trials,
                         const std::optional<std::filesystem::path>& poses) {
  std::ifstream tin(trials);
  if (!tin) throw InputError("cannot open " + trials.string());
  std::ifstream pin;
  if (poses) {
    pin.open(*poses);
    if (!pin) throw InputError("cannot open " + poses->string());
  }
  return parse_trial_log(tin, poses ? &pin : nullptr,
                         trials.filename().string(),
                         poses ? poses->filename().string() : "");
}

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> trials) {
  out << kTrialsHeader << '\n';
  for (const TrialRecord& t : trials) {
    out << t.trial_id << ',' << t.subject_id << ','
        << condition_name(t.condition) << ','
        << csv::format(t.target.direction.azimuth_deg) << ','
        << csv::format(t.target.direction.elevation_deg) << ','
        << csv::format(t.target.distance_m) << ','
        << csv::format(t.response.azimuth_deg) << ','
        << csv::format(t.response.elevation_deg) << '\n';
  }
}

void write_poses_csv(std::ostream& out, std::span<const TrialRecord> trials) {
  out << kPosesHeader << '\n';
  for (const TrialRecord& t : trials)
    for (const HeadPoseSample& p : t.poses)
      out << t.trial_id << ',' << csv::format(p.t_s) << ','
          << csv::format(p.yaw_deg) << ',' << csv::format(p.pitch_deg) << ','
          << csv::format(p.roll_deg) << ',' << (p.in_stimulus ? 1 : 0) << '\n';
}

}  // namespace bincue
