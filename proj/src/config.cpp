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


#include "bincue/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bincue/error.hpp"

namespace bincue {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!obj.is_object())
    throw InputError("config: " + (where.empty() ? "document" : where) +
                     " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key))
      throw InputError("config: unknown key '" +
                       (where.empty() ? key : where + "." + key) + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, const std::string& where, T& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw InputError("config: '" + (where.empty() ? "" : where + ".") + key +
                     "' has the wrong type");
  }
}

template <typename T>
void read_opt(const json& obj, const char* key, const std::string& where,
              std::optional<T>& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (it->is_null()) {
    out.reset();
    return;
  }
  T v{};
  read(obj, key, where, v);
  out = v;
}

}  // namespace

void RunConfig::validate() const {
  if (sample_rate_hz < 8000 || sample_rate_hz > 384000)
    throw InputError("sample_rate_hz must be within [8000, 384000]");
  head.validate();
  room.validate();
  sweep_azimuths(sweep.azimuth_step_deg);
  if (sweep.distances_m.empty()) throw InputError("sweep.distances_m is empty");
  for (double d : sweep.distances_m)
    if (!(d > head.head_radius_m))
      throw InputError("sweep distances must exceed the head radius");
  if (sweep.conditions.empty()) throw InputError("sweep.conditions is empty");
  if (!(sweep.burst_s > 0)) throw InputError("sweep.burst_s must be > 0");
  if (!(sweep.tail_duration_s > 0))
    throw InputError("sweep.tail_duration_s must be > 0");
  if (onset.sg_window < 3 || onset.sg_window % 2 == 0)
    throw InputError("kinematics.sg_window must be odd and >= 3");
  if (onset.sg_order < 0 || onset.sg_order >= onset.sg_window)
    throw InputError("kinematics.sg_order must be in [0, sg_window)");
  if (!(onset.threshold_fraction > 0 && onset.threshold_fraction < 1))
    throw InputError("kinematics.onset_threshold_fraction must be in (0, 1)");
  if (!(onset.noise_floor_deg_s >= 0))
    throw InputError("kinematics.onset_noise_floor_deg_s must be >= 0");
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  RunConfig c;
  check_keys(doc, "",
             {"sample_rate_hz", "seed", "output_dir", "head", "room", "sweep",
              "kinematics", "stimulus"});
  read(doc, "sample_rate_hz", "", c.sample_rate_hz);
  read(doc, "seed", "", c.seed);
  std::string out_dir = c.output_dir.string();
  read(doc, "output_dir", "", out_dir);
  c.output_dir = out_dir;

  if (doc.contains("head")) {
    const json& h = doc["head"];
    check_keys(h, "head",
               {"radius_m", "speed_of_sound_m_s", "shadow_cutoff_ipsi_hz",
                "shadow_cutoff_contra_hz"});
    read(h, "radius_m", "head", c.head.head_radius_m);
    read(h, "speed_of_sound_m_s", "head", c.head.speed_of_sound_m_s);
    read(h, "shadow_cutoff_ipsi_hz", "head", c.head.shadow_cutoff_ipsi_hz);
    read(h, "shadow_cutoff_contra_hz", "head", c.head.shadow_cutoff_contra_hz);
  }
  if (doc.contains("room")) {
    const json& r = doc["room"];
    check_keys(r, "room",
               {"band_centers_hz", "t30_s", "edt_s", "broadband_t30_s",
                "broadband_edt_s", "direct_rule_db_per_doubling",
                "reverb_rule_db_per_doubling", "reference_distance_m",
                "tail_level_db_at_reference"});
    read(r, "band_centers_hz", "room", c.room.band_centers_hz);
    read(r, "t30_s", "room", c.room.t30_s);
    read(r, "edt_s", "room", c.room.edt_s);
    read_opt(r, "broadband_t30_s", "room", c.room.broadband_t30_s);
    read_opt(r, "broadband_edt_s", "room", c.room.broadband_edt_s);
    read(r, "direct_rule_db_per_doubling", "room",
         c.room.direct_rule_db_per_doubling);
    read(r, "reverb_rule_db_per_doubling", "room",
         c.room.reverb_rule_db_per_doubling);
    read(r, "reference_distance_m", "room", c.room.reference_distance_m);
    read(r, "tail_level_db_at_reference", "room",
         c.room.tail_level_db_at_reference);
  }
  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    check_keys(s, "sweep",
               {"azimuth_step_deg", "distances_m", "conditions", "burst_s",
                "tail_duration_s", "threads", "ir_set_dir"});
    read(s, "azimuth_step_deg", "sweep", c.sweep.azimuth_step_deg);
    read(s, "distances_m", "sweep", c.sweep.distances_m);
    if (s.contains("conditions")) {
      std::vector<std::string> labels;
      read(s, "conditions", "sweep", labels);
      c.sweep.conditions.clear();
      for (const auto& l : labels) {
        const Condition cond = parse_condition(l);
        for (Condition seen : c.sweep.conditions)
          if (seen == cond)
            throw InputError("config: sweep.conditions lists " + l + " twice");
        c.sweep.conditions.push_back(cond);
      }
    }
    read(s, "burst_s", "sweep", c.sweep.burst_s);
    read(s, "tail_duration_s", "sweep", c.sweep.tail_duration_s);
    read(s, "threads", "sweep", c.sweep.threads);
    std::optional<std::string> ir_dir;
    read_opt(s, "ir_set_dir", "sweep", ir_dir);
    if (ir_dir) c.ir_set_dir = *ir_dir;
  }
  if (doc.contains("kinematics")) {
    const json& k = doc["kinematics"];
    check_keys(k, "kinematics",
               {"sg_window", "sg_order", "onset_threshold_fraction",
                "onset_noise_floor_deg_s"});
    read(k, "sg_window", "kinematics", c.onset.sg_window);
    read(k, "sg_order", "kinematics", c.onset.sg_order);
    read(k, "onset_threshold_fraction", "kinematics",
         c.onset.threshold_fraction);
    read(k, "onset_noise_floor_deg_s", "kinematics",
         c.onset.noise_floor_deg_s);
  }
  if (doc.contains("stimulus")) {
    const json& s = doc["stimulus"];
    check_keys(s, "stimulus", {"core_path"});
    std::optional<std::string> core;
    read_opt(s, "core_path", "stimulus", core);
    if (core) c.stimulus_core = *core;
  }
  c.sweep.sample_rate_hz = c.sample_rate_hz;
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig c = parse_config(ss.str());
  // Relative paths inside the file are relative to the file.
  const auto base = path.parent_path();
  if (c.ir_set_dir && c.ir_set_dir->is_relative())
    c.ir_set_dir = base / *c.ir_set_dir;
  if (c.stimulus_core && c.stimulus_core->is_relative())
    c.stimulus_core = base / *c.stimulus_core;
  return c;
}

}  // namespace bincue
