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

// Minimal CSV helpers shared by the table readers and writers. Numbers are
// written in shortest round-trip form so re-reading reproduces every bit.

#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bincue/error.hpp"

namespace bincue::csv {

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// Whole-field parse; nullopt on trailing junk, empty input or non-finite.
inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  if (v != v || v - v != 0) return std::nullopt;
  return v;
}

inline std::optional<long long> parse_int(std::string_view s) {
  s = trim(s);
  long long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size())
    return std::nullopt;
  return v;
}

inline std::string format(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

// Compares a header line with the expected columns and names the first
// difference.
inline void check_header(std::string_view line, std::string_view expected,
                         const std::string& what) {
  const auto got = split(trim(line));
  const auto want = split(expected);
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (i >= got.size())
      throw InputError(what + ": missing column '" + std::string(want[i]) + "'");
    if (trim(got[i]) != want[i])
      throw InputError(what + ": column " + std::to_string(i + 1) + " is '" +
                       std::string(trim(got[i])) + "', expected '" +
                       std::string(want[i]) + "'");
  }
  if (got.size() > want.size())
    throw InputError(what + ": unexpected column '" +
                     std::string(got[want.size()]) + "'");
}

}  // namespace bincue::csv
