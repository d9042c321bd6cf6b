/* Copyright 2026 The fdakit Authors. All Rights Reserved.

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

#ifndef FDAKIT_CLI_HPP_
#define FDAKIT_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace fdakit::cli {

// Stable process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kPartialFailure = 1,  // some inputs failed, the rest were processed
  kUsageError = 2,      // bad flags, config, or an unsatisfiable budget
};

// Runs the command line `args` (args[0] is the program name) and returns the
// exit code. Diagnostics go to `err`, listings and reports to `out`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace fdakit::cli

#endif  // FDAKIT_CLI_HPP_
