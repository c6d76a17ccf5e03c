// Copyright 2026 The RCA Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RCA_CLI_CLI_H_
#define RCA_CLI_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace rca::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

// Runs the `rca` command line. `args` excludes the program name. Normal
// output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parses "0.5:0.05:0.95" (start:step:stop, inclusive) or "0.5,0.75".
// Throws ConfigError on malformed input.
std::vector<double> parse_threshold_ladder(const std::string& text);

}  // namespace rca::cli

#endif  // RCA_CLI_CLI_H_
