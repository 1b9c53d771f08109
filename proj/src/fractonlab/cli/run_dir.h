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


#ifndef _FRACTONLAB_CLI_RUN_DIR_H
#define _FRACTONLAB_CLI_RUN_DIR_H

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace fractonlab {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string &bytes);

std::string read_file(const std::filesystem::path &path);

/// Writes to a sibling temporary file and renames it over `path`, creating
/// parent directories as needed.
void atomic_write(const std::filesystem::path &path, const std::string &content);

/// UTC time as ISO 8601.
std::string utc_timestamp();

/// Directory used when no output path is given: $FRACTONLAB_OUTPUT_ROOT, else "runs".
std::filesystem::path default_output_root();
constexpr const char *kOutputRootEnv = "FRACTONLAB_OUTPUT_ROOT";

/// Records every output of a run with its checksum.
class RunManifest {
   public:
    RunManifest() = default;
    RunManifest(std::filesystem::path run_dir, std::string command);

    void set_config(const std::string &config_text);
    void set_status(const std::string &status);
    void set_summary(const std::string &key, nlohmann::json value);
    /// Adds or refreshes `relative` (a path inside the run dir) from its current content.
    void track(const std::filesystem::path &relative);
    /// Rewrites manifest.json atomically.
    void write();

    const nlohmann::json &data() const {
        return data_;
    }
    static RunManifest load(const std::filesystem::path &run_dir);

   private:
    std::filesystem::path run_dir_;
    nlohmann::json data_;
};

constexpr const char *kManifestMagic = "FRACTONLAB-MANIFEST 1";

}  // namespace fractonlab

#endif
