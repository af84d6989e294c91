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

#include "bincue/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "bincue/error.hpp"

namespace bincue::wav {
namespace {

std::uint32_t U32(const unsigned char* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
         (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}
std::uint16_t U16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void Put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void Put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

Audio read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open WAV file " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  const auto fail = [&](const std::string& why) {
    return InputError(path.string() + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw fail("not a RIFF/WAVE file");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t size = U32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) throw fail("truncated chunk");
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw fail("short fmt chunk");
      format = U16(chunk + 8);
      channels = U16(chunk + 10);
      rate = U32(chunk + 12);
      bits = U16(chunk + 22);
      if (format == kFormatExtensible && size >= 26) format = U16(chunk + 32);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = size;
    }
    pos = body + size + (size & 1);
  }
  if (channels == 0 || rate == 0) throw fail("missing fmt chunk");
  if (data == nullptr) throw fail("missing data chunk");
  const bool pcm = format == kFormatPcm && (bits == 16 || bits == 24 || bits == 32);
  const bool flt = format == kFormatFloat && (bits == 32 || bits == 64);
  if (!pcm && !flt) {
    throw fail("unsupported sample format (" + std::to_string(format) + ", " +
               std::to_string(bits) + " bits)");
  }
  const std::size_t width = bits / 8;
  const std::size_t frames = data_size / (width * channels);
  Audio audio;
  audio.sample_rate_hz = static_cast<int>(rate);
  audio.channels.assign(channels, std::vector<double>(frames));
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + (f * channels + c) * width;
      double v = 0.0;
      if (pcm && bits == 16) {
        v = static_cast<std::int16_t>(U16(p)) / 32768.0;
      } else if (pcm && bits == 24) {
        std::int32_t s = std::int32_t(p[0]) | (std::int32_t(p[1]) << 8) | (std::int32_t(p[2]) << 16);
        if (s & 0x800000) s -= 0x1000000;
        v = s / 8388608.0;
      } else if (pcm && bits == 32) {
        v = static_cast<std::int32_t>(U32(p)) / 2147483648.0;
      } else if (bits == 32) {
        float f32;
        std::memcpy(&f32, p, 4);
        v = f32;
      } else {
        std::memcpy(&v, p, 8);
      }
      audio.channels[c][f] = v;
    }
  }
  return audio;
}

SampledSignal read_mono(const std::filesystem::path& path) {
  Audio a = read(path);
  if (a.channels.size() != 1) {
    throw InputError(path.string() + ": expected mono audio, found " +
                     std::to_string(a.channels.size()) + " channels");
  }
  return {a.sample_rate_hz, std::move(a.channels[0])};
}

BinauralPair read_stereo(const std::filesystem::path& path) {
  Audio a = read(path);
  if (a.channels.size() != 2) {
    throw InputError(path.string() + ": expected stereo audio, found " +
                     std::to_string(a.channels.size()) + " channels");
  }
  return {{a.sample_rate_hz, std::move(a.channels[0])},
          {a.sample_rate_hz, std::move(a.channels[1])}};
}

void write_pcm16(const std::filesystem::path& path, int sample_rate_hz,
                 const std::vector<std::vector<double>>& channels) {
  if (channels.empty()) throw InputError("no channels to write");
  const std::size_t frames = channels.front().size();
  for (const auto& c : channels) {
    if (c.size() != frames) throw InputError("channels differ in length");
  }
  const auto n_ch = static_cast<std::uint16_t>(channels.size());
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(frames * n_ch * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  Put32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  Put32(out, 16);
  Put16(out, kFormatPcm);
  Put16(out, n_ch);
  Put32(out, static_cast<std::uint32_t>(sample_rate_hz));
  Put32(out, static_cast<std::uint32_t>(sample_rate_hz) * n_ch * 2);
  Put16(out, static_cast<std::uint16_t>(n_ch * 2));
  Put16(out, 16);
  out += "data";
  Put32(out, data_bytes);
  for (std::size_t f = 0; f < frames; ++f) {
    for (const auto& c : channels) {
      const double v = std::clamp(c[f], -1.0, 1.0);
      const auto s = static_cast<std::int16_t>(std::lround(v * 32767.0));
      Put16(out, static_cast<std::uint16_t>(s));
    }
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw InputError("failed writing " + path.string());
}

}  // namespace bincue::wav
