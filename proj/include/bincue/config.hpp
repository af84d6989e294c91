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

// Run configuration: defaults, JSON loading with strict key checking, and
// validation. Precedence is defaults < config file < command-line flags.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "bincue/behavior.hpp"
#include "bincue/cues.hpp"
#include "bincue/render.hpp"

namespace bincue {

struct RunConfig {
  int sample_rate_hz = kDefaultSampleRate;
  std::uint64_t seed = 42;
  std::filesystem::path output_dir = "out";
  HeadModel head;
  RoomAcoustics room = RoomAcoustics::table_defaults();
  SweepConfig sweep;
  std::optional<std::filesystem::path> ir_set_dir;
  OnsetOptions onset;
  std::optional<std::filesystem::path> stimulus_core;

  // Throws InputError naming the first invalid field.
  void validate() const;
};

// Sections: head, room, sweep, kinematics, stimulus, plus top-level
// sample_rate_hz, seed and output_dir. Unknown keys throw InputError with
// the dotted key path.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace bincue
