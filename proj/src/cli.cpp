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


#include "bincue/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bincue/behavior.hpp"
#include "bincue/config.hpp"
#include "bincue/cues.hpp"
#include "bincue/error.hpp"
#include "bincue/random.hpp"
#include "bincue/render.hpp"
#include "bincue/report.hpp"
#include "bincue/signals.hpp"
#include "bincue/wav.hpp"
#include "csv.hpp"

namespace bincue {
namespace {

namespace fs = std::filesystem;

struct GlobalFlags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool quiet = false;
};

RunConfig resolve_config(const GlobalFlags& g) {
  RunConfig c = g.config ? load_config(*g.config) : RunConfig{};
  if (g.seed) c.seed = *g.seed;
  if (g.out) c.output_dir = *g.out;
  c.validate();
  return c;
}

std::ifstream open_input(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot open " + p.string());
  return in;
}

// Files staged in memory and written together once a command succeeds.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}
  void add(const std::string& name, std::string content) {
    files_[name] = std::move(content);
  }
  void commit() const {
    fs::create_directories(dir_);
    for (const auto& [name, content] : files_) write(dir_ / name, content);
  }
  static void write(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f || !f.write(content.data(), static_cast<std::streamsize>(content.size())))
      throw InputError("cannot write " + p.string());
  }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::map<std::string, std::string> files_;
};

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

// ---------------------------------------------------------------- stimulus

int cmd_stimulus(const GlobalFlags& g, const std::optional<std::string>& core,
                 std::ostream& out) {
  RunConfig cfg = resolve_config(g);
  if (core) cfg.stimulus_core = *core;
  const int rate = cfg.sample_rate_hz;
  Rng rng(derive_seed(cfg.seed, {0x571}));

  SampledSignal core_signal;
  const bool placeholder = !cfg.stimulus_core;
  if (placeholder) {
    Rng core_rng(derive_seed(cfg.seed, {0xC0E}));
    core_signal = pink_noise(1.0, rate, core_rng);
  } else {
    core_signal = wav::read_mono(*cfg.stimulus_core);
    if (core_signal.sample_rate_hz != rate)
      throw InputError("core audio is " +
                       std::to_string(core_signal.sample_rate_hz) +
                       " Hz, expected " + std::to_string(rate) + " Hz");
  }
  const Stimulus st = build_stimulus(core_signal, rate, rng);

  nlohmann::ordered_json meta;
  meta["sample_rate_hz"] = rate;
  meta["frames"] = st.signal.size();
  meta["seed"] = cfg.seed;
  meta["placeholder_core"] = placeholder;
  meta["core_path"] = placeholder ? nlohmann::ordered_json(nullptr)
                                  : nlohmann::ordered_json(cfg.stimulus_core->string());
  meta["segments"] = {"pink", "core", "pink", "tone_1khz"};
  meta["boundaries_s"] = st.boundaries_s;

  fs::create_directories(cfg.output_dir);
  const fs::path wav_path = cfg.output_dir / "stimulus.wav";
  const fs::path tmp = cfg.output_dir / "stimulus.wav.tmp";
  wav::write_pcm16(tmp, rate, {st.signal.samples});
  fs::rename(tmp, wav_path);
  Outputs::write(cfg.output_dir / "stimulus.json", meta.dump(2) + "\n");

  if (!g.quiet) {
    out << "stimulus: " << st.signal.size() << " frames at " << rate << " Hz"
        << (placeholder ? " (pink-noise placeholder core)" : "") << "\n";
    out << "segments start at 0 s";
    for (double b : st.boundaries_s) out << ", " << csv::format(b) << " s";
    out << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- sweep

int cmd_sweep(const GlobalFlags& g, const std::optional<double>& step,
              const std::optional<unsigned>& threads, std::ostream& out) {
  RunConfig cfg = resolve_config(g);
  if (step) cfg.sweep.azimuth_step_deg = *step;
  if (threads) cfg.sweep.threads = *threads;
  cfg.validate();

  CueTable table;
  if (cfg.ir_set_dir) {
    const MeasuredIrSet set = MeasuredIrSet::load(*cfg.ir_set_dir);
    table = cue_sweep(set, cfg.head, cfg.room, cfg.sweep, cfg.seed);
  } else {
    const SphericalHeadSource src(cfg.head);
    table = cue_sweep(src, cfg.head, cfg.room, cfg.sweep, cfg.seed);
  }
  const CueTable normalized = normalize_ild(table);

  Outputs o(cfg.output_dir);
  std::ostringstream a, b;
  write_cue_csv(a, table);
  write_cue_csv(b, normalized);
  o.add("cues.csv", a.str());
  o.add("cues_normalized.csv", b.str());
  o.commit();

  if (!g.quiet) {
    out << "sweep: " << table.rows.size() << " rows\n";
    for (Condition c : cfg.sweep.conditions) {
      double s = 0;
      std::size_t n = 0;
      for (const CueRow& r : table.rows)
        if (r.condition == c) s += r.cues.iacc, ++n;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", n ? s / n : 0.0);
      out << "mean IACC " << condition_name(c) << ": " << buf << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------- behavior

std::string rejects_csv(const std::vector<RejectedRow>& rejects) {
  std::string s = "file,line,reason\n";
  for (const auto& r : rejects)
    s += quote(r.file) + "," + std::to_string(r.line) + "," + quote(r.reason) +
         "\n";
  return s;
}

int cmd_behavior(const GlobalFlags& g, const std::string& trials_path,
                 const std::optional<std::string>& poses_path,
                 std::ostream& out) {
  const RunConfig cfg = resolve_config(g);
  TrialLog log = parse_trial_log(fs::path(trials_path),
                                 poses_path ? std::optional<fs::path>(*poses_path)
                                            : std::nullopt);

  auto fail_with_rejects = [&](const std::string& msg) {
    fs::create_directories(cfg.output_dir);
    Outputs::write(cfg.output_dir / "rejects.csv", rejects_csv(log.rejects));
    throw InputError(msg);
  };
  if (log.trials.empty()) fail_with_rejects("no trials");

  std::string onsets =
      "trial_id,subject_id,condition,onset_s,all_onsets_s,peak_speed_deg_s\n";
  std::string roms = "subject_id,n_trials,rom_deg\n";
  if (log.has_kinematics) {
    for (const TrialRecord& t : log.trials) {
      if (t.poses.empty()) {
        log.rejects.push_back({"poses", 0, "trial " + t.trial_id + ": no poses"});
        continue;
      }
      OnsetResult r;
      try {
        r = movement_onset(t.poses, cfg.onset);
      } catch (const InputError& e) {
        log.rejects.push_back({"poses", 0, "trial " + t.trial_id + ": " + e.what()});
        continue;
      }
      std::string all;
      for (std::size_t i = 0; i < r.all_onsets_s.size(); ++i)
        all += (i ? ";" : "") + csv::format(r.all_onsets_s[i]);
      onsets += t.trial_id + "," + t.subject_id + "," +
                std::string(condition_name(t.condition)) + "," +
                (r.onset_s ? csv::format(*r.onset_s) : "") + "," + all + "," +
                csv::format(r.peak_speed_deg_s) + "\n";
    }
    for (const SubjectRom& s : subject_rom(log.trials))
      roms += s.subject_id + "," + std::to_string(s.n_trials) + "," +
              csv::format(s.rom_deg) + "\n";
  }

  const auto loc = localisation_summary(log.trials, GroupBy::kConditionDistance);
  const auto subjects = subject_condition_table(log.trials);

  Outputs o(cfg.output_dir);
  std::ostringstream l, s;
  write_localisation_csv(l, loc);
  write_subject_condition_csv(s, subjects);
  o.add("localisation.csv", l.str());
  o.add("subject_condition.csv", s.str());
  o.add("rom.csv", roms);
  o.add("onsets.csv", onsets);
  o.add("rejects.csv", rejects_csv(log.rejects));
  o.commit();

  if (!g.quiet) {
    out << "behavior: " << log.trials.size() << " trials, "
        << log.rejects.size() << " rejected rows, " << loc.size()
        << " condition x distance groups"
        << (log.has_kinematics ? "" : " (no kinematics)") << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- report

int cmd_report(const GlobalFlags& g, const std::optional<std::string>& cues_path,
               const std::optional<std::string>& metrics_dir,
               std::ostream& out) {
  const RunConfig cfg = resolve_config(g);
  if (!cues_path && !metrics_dir)
    throw InputError("report needs --cues and/or --metrics");

  std::optional<CueTable> cues;
  std::optional<std::vector<LocalisationSummary>> loc;
  std::optional<std::vector<SubjectConditionRow>> subjects;
  if (cues_path) {
    std::ifstream in = open_input(*cues_path);
    try {
      cues = read_cue_csv(in);
    } catch (const InputError& e) {
      throw InputError(*cues_path + ": " + e.what());
    }
  }
  if (metrics_dir) {
    const fs::path dir(*metrics_dir);
    std::ifstream l = open_input(dir / "localisation.csv");
    loc = read_localisation_csv(l);
    const fs::path sp = dir / "subject_condition.csv";
    if (fs::exists(sp)) {
      std::ifstream s = open_input(sp);
      subjects = read_subject_condition_csv(s);
    }
  }
  ReportInputs in;
  if (cues) in.cues = &*cues;
  if (loc) in.localisation = &*loc;
  if (subjects) in.subjects = &*subjects;
  const std::string text = build_report(in);

  Outputs o(cfg.output_dir);
  o.add("report.txt", text);
  o.commit();
  if (!g.quiet) out << text;
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Binaural cue simulation and localisation analysis", "bincue"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--config", g.config, "JSON run configuration");
  app.add_option("--seed", g.seed, "Base random seed");
  app.add_option("--out", g.out, "Output directory");
  app.add_flag("--quiet", g.quiet, "Suppress summaries on stdout");

  std::optional<std::string> core;
  auto* stim = app.add_subcommand("stimulus", "Build the 1.6 s test stimulus");
  stim->add_option("--core", core, "Mono WAV for the 1 s core segment");

  std::optional<double> step;
  std::optional<unsigned> threads;
  auto* sweep = app.add_subcommand("sweep", "Cue sweep over azimuth, distance and room");
  sweep->add_option("--azimuth-step", step, "Azimuth step in degrees");
  sweep->add_option("--threads", threads, "Worker threads (0: all cores)");

  std::string trials;
  std::optional<std::string> poses;
  auto* beh = app.add_subcommand("behavior", "Localisation and head-movement metrics");
  beh->add_option("--trials", trials, "trials.csv")->required();
  beh->add_option("--poses", poses, "poses.csv");

  std::optional<std::string> cues_path, metrics;
  auto* rep = app.add_subcommand("report", "Plain-text analysis report");
  rep->add_option("--cues", cues_path, "cues.csv from sweep");
  rep->add_option("--metrics", metrics, "Output directory of behavior");

  for (auto* sub : {stim, sweep, beh, rep}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*stim) return cmd_stimulus(g, core, out);
    if (*sweep) return cmd_sweep(g, step, threads, out);
    if (*beh) return cmd_behavior(g, trials, poses, out);
    return cmd_report(g, cues_path, metrics, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace bincue
