/* Copyright 2026 The PIM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Plain-text problem files: one `key = value` per line, `#` starts a comment.

#ifndef PIM_CLI_PROBLEM_HPP_
#define PIM_CLI_PROBLEM_HPP_

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "pim/model.hpp"

namespace pim::cli {

struct Problem {
  PeriodicityConfig config;
  TargetBox box;
  SolverParams params;
  std::string sources_path;
  std::string observers_path;
  std::string output_path;
  std::string far_kernel_cache;
};

using KeyValues = std::map<std::string, std::string>;

// Every accepted key, in the order format_problem writes them.
const std::vector<std::string>& problem_keys();

// Throws InvalidArgument on malformed lines or repeated keys.
KeyValues parse_key_values(std::istream& in, const std::string& origin);
// Throws IoError when the file cannot be opened.
KeyValues read_key_values(const std::string& path);

// Applies `kv` over the defaults. Unknown keys and unparsable values raise
// InvalidArgument. Without a `regime` key the regime follows from k0 and
// the phase shifts.
Problem make_problem(const KeyValues& kv);

// Round-trips through parse_key_values + make_problem.
std::string format_problem(const Problem& problem);

}  // namespace pim::cli

#endif  // PIM_CLI_PROBLEM_HPP_
