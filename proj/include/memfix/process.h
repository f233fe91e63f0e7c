// Copyright 2026 The memfix Authors
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

#ifndef MEMFIX_PROCESS_H_
#define MEMFIX_PROCESS_H_

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace memfix {

struct ProcessResult {
  bool launched = false;  // false when exec failed (binary missing etc.)
  int exec_errno = 0;
  int exit_code = -1;     // -1 when killed by a signal
  bool timed_out = false;
  std::string output;     // stdout and stderr, interleaved
  double wall_seconds = 0.0;
};

// Runs argv[0] (PATH lookup) in its own process group. When `timeout` elapses
// the group gets SIGTERM, then SIGKILL after `grace`.
ProcessResult RunProcess(const std::vector<std::string>& argv,
                         const std::filesystem::path& working_dir,
                         std::chrono::milliseconds timeout,
                         std::chrono::milliseconds grace =
                             std::chrono::milliseconds(2000));

}  // namespace memfix

#endif  // MEMFIX_PROCESS_H_
