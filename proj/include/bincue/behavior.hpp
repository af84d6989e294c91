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

// Trial-log ingestion and behavioural metrics: lateral/polar errors,
// quadrant errors, grouped precision/accuracy, head range of motion and
// movement onset.

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bincue/condition.hpp"
#include "bincue/geometry.hpp"

namespace bincue {

struct HeadPoseSample {
  double t_s = 0.0;  // from trial start
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;
  double roll_deg = 0.0;
  bool in_stimulus = false;
};

struct TrialRecord {
  std::string trial_id;
  std::string subject_id;
  Condition condition = Condition::kAnechoic;
  SourcePosition target;
  DirectionSpherical response;  // head yaw/pitch at the button press
  std::vector<HeadPoseSample> poses;
};

struct AngularErrors {
  double lateral_deg = 0.0;  // response - target
  double polar_deg = 0.0;    // wrapped to (-180, 180]
};

AngularErrors angular_errors(const DirectionSpherical& target,
                             const DirectionSpherical& response);
inline double lateral_error(const DirectionSpherical& t,
                            const DirectionSpherical& r) {
  return angular_errors(t, r).lateral_deg;
}
inline double polar_error(const DirectionSpherical& t,
                          const DirectionSpherical& r) {
  return angular_errors(t, r).polar_deg;
}

// |polar error| * (0.5 cos(2 lateral) + 0.5).
double weighted_polar_error(double target_lateral_deg, double polar_error_deg);

inline constexpr double kQuadrantLateralLimitDeg = 60.0;
inline constexpr double kQuadrantErrorDeg = 45.0;

// Targets within +-60 deg lateral take part in quadrant-error scoring.
bool quadrant_eligible(const TrialRecord& t);
// Eligible and weighted polar error above 45 deg.
bool is_quadrant_error(const TrialRecord& t);
// Percent of eligible trials that are quadrant errors. Throws InputError
// when no trial is eligible.
double quadrant_error_rate(std::span<const TrialRecord> trials);

enum class GroupBy { kCondition, kConditionDistance };

// Distances are grouped on a 0.1 m grid.
double distance_bin(double distance_m);

struct LocalisationSummary {
  Condition condition = Condition::kAnechoic;
  std::optional<double> distance_m;  // absent when grouped by condition only
  std::size_t n_trials = 0;
  std::size_t n_eligible = 0;  // quadrant-error denominator
  std::size_t n_polar = 0;     // trials entering the polar metrics
  // Precision is the sample SD (about the group mean) of signed errors and
  // needs two trials; accuracy is the mean unsigned error. Polar metrics
  // use only trials that are not quadrant errors. Absent when undefined.
  std::optional<double> lateral_precision_deg;
  std::optional<double> lateral_accuracy_deg;
  std::optional<double> polar_precision_deg;
  std::optional<double> polar_accuracy_deg;
  std::optional<double> quadrant_error_rate_pct;
};

// One row per group, sorted by (condition, distance).
std::vector<LocalisationSummary> localisation_summary(
    std::span<const TrialRecord> trials, GroupBy group_by);

// Poses inside the stimulus window.
std::vector<HeadPoseSample> stimulus_window(const TrialRecord& t);
// max |yaw(t) - yaw(t0)| over the stimulus window, t0 its first sample.
// Throws InputError when the window is empty.
double rom(const TrialRecord& t);

struct SubjectRom {
  std::string subject_id;
  std::size_t n_trials = 0;
  double rom_deg = 0.0;  // mean of trial ROMs
};
// Sorted by subject id; trials without stimulus-window poses are skipped.
std::vector<SubjectRom> subject_rom(std::span<const TrialRecord> trials);

struct OnsetOptions {
  int sg_window = 11;
  int sg_order = 3;
  double threshold_fraction = 0.05;
  double noise_floor_deg_s = 5.0;
};

struct OnsetResult {
  std::optional<double> onset_s;     // earliest movement onset
  std::vector<double> all_onsets_s;  // start of every suprathreshold run
  double peak_speed_deg_s = 0.0;
};

// Yaw speed by central differences (one-sided at the ends), smoothed with
// Savitzky-Golay; the onset is where the suprathreshold run holding the
// earliest peak begins. No onset when the peak speed is under the noise
// floor. Throws InputError on fewer than 3 samples, a series shorter than
// the smoothing window or non-increasing timestamps.
OnsetResult movement_onset(std::span<const HeadPoseSample> poses,
                           const OnsetOptions& opt = {});

struct RejectedRow {
  std::string file;
  int line = 0;
  std::string reason;
};

struct TrialLog {
  std::vector<TrialRecord> trials;  // in file order
  std::vector<RejectedRow> rejects;
  bool has_kinematics = false;
};

inline constexpr const char* kTrialsHeader =
    "trial_id,subject_id,condition,target_azimuth_deg,target_elevation_deg,"
    "target_distance_m,response_yaw_deg,response_pitch_deg";
inline constexpr const char* kPosesHeader =
    "trial_id,t_s,yaw_deg,pitch_deg,roll_deg,in_stimulus";

// An empty trials stream or a header mismatch throws InputError (the
// mismatch names the offending column);
// malformed rows are collected as rejects with their line numbers. An
// empty or header-only poses stream means no kinematics.
TrialLog parse_trial_log(std::istream& trials, std::istream* poses,
                         const std::string& trials_name = "trials.csv",
                         const std::string& poses_name = "poses.csv");
TrialLog parse_trial_log(const std::filesystem::path& trials,
                         const std::optional<std::filesystem::path>& poses);

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> trials);
void write_poses_csv(std::ostream& out, std::span<const TrialRecord> trials);

}  // namespace bincue
