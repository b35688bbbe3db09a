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

#ifndef PIM_CLI_APP_HPP_
#define PIM_CLI_APP_HPP_

#include <ostream>

namespace pim::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,  // bad input, usage or failed validation
  kExitPgf = 2,         // series did not converge, Wood anomaly, singularity
  kExitIo = 3
};

// Entry point of the `pim` executable. Tables go to `out` (or --output),
// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace pim::cli

#endif  // PIM_CLI_APP_HPP_
