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

// Tabular outputs of the behavioural pipeline and the plain-text analysis
// report combining cue and behavioural results.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bincue/behavior.hpp"
#include "bincue/cues.hpp"

namespace bincue {

struct SubjectConditionRow {
  std::string subject_id;
  Condition condition = Condition::kAnechoic;
  std::size_t n_trials = 0;
  std::optional<double> rom_deg;  // mean trial ROM
  std::optional<double> quadrant_error_rate_pct;
};

// One row per (subject, condition), sorted. ROM is left empty without
// kinematics or when no trial has stimulus-window poses.
std::vector<SubjectConditionRow> subject_condition_table(
    std::span<const TrialRecord> trials);

inline constexpr const char* kLocalisationHeader =
    "condition,distance_m,n_trials,n_eligible,n_polar,lateral_precision_deg,"
    "lateral_accuracy_deg,polar_precision_deg,polar_accuracy_deg,"
    "quadrant_error_rate_pct";
inline constexpr const char* kSubjectConditionHeader =
    "subject_id,condition,n_trials,rom_deg,quadrant_error_rate_pct";

// Missing values are empty fields.
void write_localisation_csv(std::ostream& out,
                            std::span<const LocalisationSummary> rows);
std::vector<LocalisationSummary> read_localisation_csv(std::istream& in);
void write_subject_condition_csv(std::ostream& out,
                                 std::span<const SubjectConditionRow> rows);
std::vector<SubjectConditionRow> read_subject_condition_csv(std::istream& in);

struct ReportInputs {
  const CueTable* cues = nullptr;
  const std::vector<LocalisationSummary>* localisation = nullptr;
  const std::vector<SubjectConditionRow>* subjects = nullptr;
};

// Sections are emitted only for the inputs given. Throws InputError when
// nothing is given.
std::string build_report(const ReportInputs& in);

}  // namespace bincue
