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


#include "bincue/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "bincue/error.hpp"
#include "bincue/stats.hpp"
#include "csv.hpp"

namespace bincue {
namespace {

std::string num(double v, int prec = 3) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v + 0.0);
  return buf;
}

std::string pval(double p) {
  char buf[64];
  if (p < 1e-4)
    std::snprintf(buf, sizeof buf, "%.2e", p);
  else
    std::snprintf(buf, sizeof buf, "%.4f", p);
  return buf;
}

std::string opt_num(const std::optional<double>& v, int prec = 3) {
  return v ? num(*v, prec) : "-";
}

std::string opt_csv(const std::optional<double>& v) {
  return v ? csv::format(*v) : "";
}

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' ');
}

std::optional<double> field(std::string_view s, const char* column,
                            const std::string& where) {
  if (csv::trim(s).empty()) return std::nullopt;
  const auto v = csv::parse_double(s);
  if (!v) throw InputError(where + ": malformed " + column);
  return v;
}

std::size_t count_field(std::string_view s, const char* column,
                        const std::string& where) {
  const auto v = csv::parse_int(s);
  if (!v || *v < 0) throw InputError(where + ": malformed " + column);
  return static_cast<std::size_t>(*v);
}

void cue_section(std::ostream& o, const CueTable& t) {
  o << "Binaural cues (" << t.rows.size() << " rows)\n";
  o << "  IACC: peak |normalized cross-correlation| within +-1 ms\n"
       "  ITD: MaxIACCe on 3 kHz low-passed envelopes of the direct-path IR\n"
       "  ILD: unweighted mean over 30 ERB bands of the 1.5 kHz high-passed "
       "signal\n\n";
  struct Acc {
    std::size_t n = 0;
    double iacc = 0, ild = 0, itd = 0;
  };
  std::map<std::pair<Condition, double>, Acc> by;
  std::map<Condition, std::vector<double>> iacc_by_cond;
  for (const CueRow& r : t.rows) {
    Acc& a = by[{r.condition, r.distance_m}];
    ++a.n;
    a.iacc += r.cues.iacc;
    a.ild += std::abs(r.cues.ild_db);
    a.itd = std::max(a.itd, std::abs(r.cues.itd_us));
    iacc_by_cond[r.condition].push_back(r.cues.iacc);
  }
  o << "  " << pad("condition", 13) << pad("distance_m", 12) << pad("n", 6)
    << pad("mean_iacc", 11) << pad("mean_abs_ild_db", 17) << "max_abs_itd_us\n";
  for (const auto& [key, a] : by) {
    o << "  " << pad(std::string(condition_name(key.first)), 13)
      << pad(num(key.second, 2), 12) << pad(std::to_string(a.n), 6)
      << pad(num(a.iacc / a.n), 11) << pad(num(a.ild / a.n, 2), 17)
      << num(a.itd, 1) << "\n";
  }
  o << "\n";
  for (const auto& [cond, v] : iacc_by_cond) {
    double s = 0;
    for (double x : v) s += x;
    o << "  mean IACC " << condition_name(cond) << ": "
      << num(s / v.size()) << "\n";
  }
  const auto an = iacc_by_cond.find(Condition::kAnechoic);
  const auto rv = iacc_by_cond.find(Condition::kReverberant);
  if (an == iacc_by_cond.end() || rv == iacc_by_cond.end()) {
    o << "\n";
    return;
  }
  const RankSumResult rs = rank_sum(an->second, rv->second);
  o << "  IACC anechoic vs reverberant, Wilcoxon rank-sum ("
    << (rs.method == RankSumMethod::kExact ? "exact" : "normal approx.")
    << "): W = " << num(rs.statistic, 1);
  if (rs.z) o << ", z = " << num(*rs.z, 2);
  o << ", p = " << pval(rs.p_value) << "\n\n";

  // ILD / IACC against the nearest anechoic curve.
  double ref_d = HUGE_VAL;
  for (const CueRow& r : t.rows)
    if (r.condition == Condition::kAnechoic) ref_d = std::min(ref_d, r.distance_m);
  std::map<double, double> ref;
  for (const CueRow& r : t.rows)
    if (r.condition == Condition::kAnechoic && r.distance_m == ref_d)
      ref[r.azimuth_deg] = r.cues.ild_db;
  o << "ILD normalization (ILD / IACC per row), RMS deviation from the "
       "anechoic "
    << num(ref_d, 2) << " m ILD curve\n";
  o << "  " << pad("distance_m", 12) << pad("n", 6) << pad("raw_db", 10)
    << "normalized_db\n";
  std::map<double, std::array<double, 3>> dev;
  for (const CueRow& r : t.rows) {
    if (r.condition != Condition::kReverberant) continue;
    const auto it = ref.find(r.azimuth_deg);
    if (it == ref.end() || !(r.cues.iacc > 0)) continue;
    auto& d = dev[r.distance_m];
    d[0] += 1;
    d[1] += std::pow(r.cues.ild_db - it->second, 2);
    d[2] += std::pow(r.cues.ild_db / r.cues.iacc - it->second, 2);
  }
  for (const auto& [d, v] : dev)
    o << "  " << pad(num(d, 2), 12) << pad(num(v[0], 0), 6)
      << pad(num(std::sqrt(v[1] / v[0]), 2), 10) << num(std::sqrt(v[2] / v[0]), 2)
      << "\n";
  o << "\n";
}

void localisation_section(std::ostream& o,
                          const std::vector<LocalisationSummary>& rows) {
  o << "Localisation\n"
       "  precision: sample SD of signed errors; accuracy: mean unsigned "
       "error\n"
       "  polar metrics exclude quadrant errors; quadrant errors counted for "
       "targets within +-60 deg lateral\n\n";
  o << "  " << pad("condition", 13) << pad("distance_m", 12) << pad("n", 5)
    << pad("lat_prec", 10) << pad("lat_acc", 10) << pad("pol_prec", 10)
    << pad("pol_acc", 10) << "qe_pct\n";
  for (const auto& r : rows) {
    o << "  " << pad(std::string(condition_name(r.condition)), 13)
      << pad(r.distance_m ? num(*r.distance_m, 2) : "all", 12)
      << pad(std::to_string(r.n_trials), 5)
      << pad(opt_num(r.lateral_precision_deg, 2), 10)
      << pad(opt_num(r.lateral_accuracy_deg, 2), 10)
      << pad(opt_num(r.polar_precision_deg, 2), 10)
      << pad(opt_num(r.polar_accuracy_deg, 2), 10)
      << opt_num(r.quadrant_error_rate_pct, 1) << "\n";
  }
  o << "\n";
}

void subject_section(std::ostream& o,
                     const std::vector<SubjectConditionRow>& rows) {
  o << "Subject-level comparisons, anechoic vs reverberant (Wilcoxon "
       "rank-sum; exact when n <= "
    << kRankSumExactLimit << ", else normal approx.)\n";
  auto compare = [&](const char* label, auto get) {
    std::vector<double> a, b;
    for (const auto& r : rows) {
      const std::optional<double> v = get(r);
      if (!v) continue;
      (r.condition == Condition::kAnechoic ? a : b).push_back(*v);
    }
    o << "  " << pad(label, 22);
    if (a.empty() || b.empty()) {
      o << "not available\n";
      return;
    }
    const RankSumResult rs = rank_sum(a, b);
    o << "n = " << a.size() << "/" << b.size()
      << ", W = " << num(rs.statistic, 1) << ", p = " << pval(rs.p_value)
      << " (" << (rs.method == RankSumMethod::kExact ? "exact" : "normal")
      << ")\n";
  };
  compare("quadrant error rate", [](const SubjectConditionRow& r) {
    return r.quadrant_error_rate_pct;
  });
  compare("ROM", [](const SubjectConditionRow& r) { return r.rom_deg; });
  o << "\n";

  o << "Quadrant error rate ~ ROM x condition: ordinary least squares, fixed "
       "effects only\n"
       "  (approximation of a mixed model; random subject effects are "
       "omitted)\n";
  std::vector<double> y, rom, cond;
  for (const auto& r : rows) {
    if (!r.rom_deg || !r.quadrant_error_rate_pct) continue;
    y.push_back(*r.quadrant_error_rate_pct);
    rom.push_back(*r.rom_deg);
    cond.push_back(r.condition == Condition::kReverberant ? 1.0 : 0.0);
  }
  try {
    const RegressionResult fit = ols_interaction(y, rom, cond);
    static const char* names[4] = {"intercept", "rom_deg", "reverberant",
                                   "rom_deg:reverberant"};
    o << "  " << pad("term", 22) << pad("estimate", 12) << pad("std_error", 12)
      << pad("t", 10) << "p\n";
    for (int k = 0; k < 4; ++k)
      o << "  " << pad(names[k], 22) << pad(num(fit.coefficients[k], 4), 12)
        << pad(num(fit.std_errors[k], 4), 12) << pad(num(fit.t_stats[k], 2), 10)
        << pval(fit.p_values[k]) << "\n";
    o << "  n = " << y.size() << ", residual df = " << fit.df_residual
      << ", R^2 = " << num(fit.r_squared, 4) << "\n";
  } catch (const InputError& e) {
    o << "  not estimable: " << e.what() << "\n";
  }
  o << "\n";
}

}  // namespace

std::vector<SubjectConditionRow> subject_condition_table(
    std::span<const TrialRecord> trials) {
  std::map<std::pair<std::string, Condition>, std::vector<const TrialRecord*>>
      groups;
  for (const TrialRecord& t : trials)
    groups[{t.subject_id, t.condition}].push_back(&t);
  std::vector<SubjectConditionRow> out;
  for (const auto& [key, members] : groups) {
    SubjectConditionRow r;
    r.subject_id = key.first;
    r.condition = key.second;
    r.n_trials = members.size();
    std::vector<TrialRecord> copy;
    for (const TrialRecord* t : members) copy.push_back(*t);
    const auto roms = subject_rom(copy);
    if (!roms.empty()) r.rom_deg = roms.front().rom_deg;
    std::size_t eligible = 0;
    for (const TrialRecord& t : copy) eligible += quadrant_eligible(t);
    if (eligible > 0) r.quadrant_error_rate_pct = quadrant_error_rate(copy);
    out.push_back(std::move(r));
  }
  return out;
}

void write_localisation_csv(std::ostream& out,
                            std::span<const LocalisationSummary> rows) {
  out << kLocalisationHeader << '\n';
  for (const auto& r : rows) {
    out << condition_name(r.condition) << ','
        << (r.distance_m ? csv::format(*r.distance_m) : "") << ','
        << r.n_trials << ',' << r.n_eligible << ',' << r.n_polar << ','
        << opt_csv(r.lateral_precision_deg) << ','
        << opt_csv(r.lateral_accuracy_deg) << ','
        << opt_csv(r.polar_precision_deg) << ','
        << opt_csv(r.polar_accuracy_deg) << ','
        << opt_csv(r.quadrant_error_rate_pct) << '\n';
  }
}

std::vector<LocalisationSummary> read_localisation_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw InputError("localisation CSV: empty file");
  csv::check_header(line, kLocalisationHeader, "localisation CSV");
  std::vector<LocalisationSummary> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (csv::trim(line).empty()) continue;
    const std::string where = "localisation CSV line " + std::to_string(lineno);
    const auto f = csv::split(csv::trim(line));
    if (f.size() != 10) throw InputError(where + ": expected 10 fields");
    LocalisationSummary r;
    try {
      r.condition = parse_condition(csv::trim(f[0]));
    } catch (const InputError& e) {
      throw InputError(where + ": condition: " + e.what());
    }
    r.distance_m = field(f[1], "distance_m", where);
    r.n_trials = count_field(f[2], "n_trials", where);
    r.n_eligible = count_field(f[3], "n_eligible", where);
    r.n_polar = count_field(f[4], "n_polar", where);
    r.lateral_precision_deg = field(f[5], "lateral_precision_deg", where);
    r.lateral_accuracy_deg = field(f[6], "lateral_accuracy_deg", where);
    r.polar_precision_deg = field(f[7], "polar_precision_deg", where);
    r.polar_accuracy_deg = field(f[8], "polar_accuracy_deg", where);
    r.quadrant_error_rate_pct = field(f[9], "quadrant_error_rate_pct", where);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_subject_condition_csv(std::ostream& out,
                                 std::span<const SubjectConditionRow> rows) {
  out << kSubjectConditionHeader << '\n';
  for (const auto& r : rows)
    out << r.subject_id << ',' << condition_name(r.condition) << ','
        << r.n_trials << ',' << opt_csv(r.rom_deg) << ','
        << opt_csv(r.quadrant_error_rate_pct) << '\n';
}

std::vector<SubjectConditionRow> read_subject_condition_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw InputError("subject CSV: empty file");
  csv::check_header(line, kSubjectConditionHeader, "subject CSV");
  std::vector<SubjectConditionRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (csv::trim(line).empty()) continue;
    const std::string where = "subject CSV line " + std::to_string(lineno);
    const auto f = csv::split(csv::trim(line));
    if (f.size() != 5) throw InputError(where + ": expected 5 fields");
    SubjectConditionRow r;
    r.subject_id = std::string(csv::trim(f[0]));
    try {
      r.condition = parse_condition(csv::trim(f[1]));
    } catch (const InputError& e) {
      throw InputError(where + ": condition: " + e.what());
    }
    r.n_trials = count_field(f[2], "n_trials", where);
    r.rom_deg = field(f[3], "rom_deg", where);
    r.quadrant_error_rate_pct = field(f[4], "quadrant_error_rate_pct", where);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string build_report(const ReportInputs& in) {
  if (!in.cues && !in.localisation && !in.subjects)
    throw InputError("report needs cue or behavioural inputs");
  std::ostringstream o;
  o << "bincue analysis report\n\n";
  if (in.cues) cue_section(o, *in.cues);
  if (in.localisation) localisation_section(o, *in.localisation);
  if (in.subjects) subject_section(o, *in.subjects);
  return o.str();
}

}  // namespace bincue
