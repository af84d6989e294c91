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

#pragma once

#include <string>
#include <string_view>

namespace bincue {

enum class Condition { kAnechoic, kReverberant };

std::string_view condition_name(Condition c);
// Accepts exactly "anechoic" or "reverberant"; anything else throws
// InputError naming the allowed labels.
Condition parse_condition(std::string_view label);

}  // namespace bincue
