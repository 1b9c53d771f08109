// Copyright 2026 The Fractonlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef _FRACTONLAB_CLI_COMMANDS_H
#define _FRACTONLAB_CLI_COMMANDS_H

#include <atomic>
#include <iosfwd>
#include <string>
#include <vector>

namespace fractonlab {

enum ExitCode : int {
    kExitOk = 0,
    /// A check run by the command failed (oracle-check).
    kExitCheckFailed = 1,
    kExitUsage = 2,
    kExitQuorum = 3,
    kExitInvariant = 4,
    /// Stopped by a signal after writing a checkpoint.
    kExitInterrupted = 130,
};

/// Set by SIGINT/SIGTERM while a run is active.
std::atomic<bool> &stop_requested();

/// Entry point of the fractonlab tool; args excludes the program name.
int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace fractonlab

#endif
