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


// Batch command-line front end: stimulus, sweep, behavior and report.
//
// Exit status: 0 success, 2 invalid input or usage, 3 numeric failure.
// Outputs are written only after the command has fully succeeded; the
// behavior command additionally writes rejects.csv whenever its inputs were
// parsed. Settings come from built-in defaults, then --config, then flags.

#pragma once

#include <iosfwd>

namespace bincue {

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace bincue
