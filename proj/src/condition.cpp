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


#include "bincue/condition.hpp"

#include <string>

#include "bincue/error.hpp"

namespace bincue {

std::string_view condition_name(Condition c) {
  return c == Condition::kAnechoic ? "anechoic" : "reverberant";
}

Condition parse_condition(std::string_view label) {
  if (label == "anechoic") return Condition::kAnechoic;
  if (label == "reverberant") return Condition::kReverberant;
  throw InputError("unknown condition '" + std::string(label) +
                   "' (expected anechoic or reverberant)");
}

}  // namespace bincue
