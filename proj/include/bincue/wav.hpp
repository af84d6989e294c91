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

// Minimal RIFF/WAVE reader and writer. Reads 16/24/32-bit PCM and 32/64-bit
// IEEE float; writes 16-bit PCM.

#pragma once

#include <filesystem>
#include <vector>

#include "bincue/signals.hpp"

namespace bincue::wav {

struct Audio {
  int sample_rate_hz = 0;
  std::vector<std::vector<double>> channels;  // each in [-1, 1]
};

// Throws InputError on unreadable or unsupported files.
Audio read(const std::filesystem::path& path);
SampledSignal read_mono(const std::filesystem::path& path);
BinauralPair read_stereo(const std::filesystem::path& path);

// Samples are clamped to [-1, 1] and rounded to 16-bit. All channels must
// have equal length.
void write_pcm16(const std::filesystem::path& path, int sample_rate_hz,
                 const std::vector<std::vector<double>>& channels);

}  // namespace bincue::wav
