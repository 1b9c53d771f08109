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


#include "fractonlab/cli/run_dir.h"

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fractonlab {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(const std::string &bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 computation failed.");
    }
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; i++) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("Cannot read '" + path.string() + "'.");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write(const fs::path &path, const std::string &content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("Cannot write '" + tmp.string() + "'.");
        }
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error("Write to '" + tmp.string() + "' failed.");
        }
    }
    fs::rename(tmp, path);
}

std::string utc_timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

fs::path default_output_root() {
    const char *env = std::getenv(kOutputRootEnv);
    if (env != nullptr && *env != '\0') {
        return fs::path(env);
    }
    return fs::path("runs");
}

RunManifest::RunManifest(fs::path run_dir, std::string command) : run_dir_(std::move(run_dir)) {
    data_ = json{
        {"magic", kManifestMagic},
        {"tool", "fractonlab"},
        {"command", std::move(command)},
        {"started", utc_timestamp()},
        {"finished", nullptr},
        {"status", "running"},
        {"summary", json::object()},
        {"files", json::object()},
    };
}

void RunManifest::set_config(const std::string &config_text) {
    data_["config"] = config_text;
    data_["input_hash"] = sha256_hex(config_text);
}

void RunManifest::set_status(const std::string &status) {
    data_["status"] = status;
    if (status != "running") {
        data_["finished"] = utc_timestamp();
    }
}

void RunManifest::set_summary(const std::string &key, json value) {
    data_["summary"][key] = std::move(value);
}

void RunManifest::track(const fs::path &relative) {
    std::string content = read_file(run_dir_ / relative);
    data_["files"][relative.generic_string()] = json{{"sha256", sha256_hex(content)}, {"bytes", content.size()}};
}

void RunManifest::write() {
    atomic_write(run_dir_ / "manifest.json", data_.dump(2) + "\n");
}

RunManifest RunManifest::load(const fs::path &run_dir) {
    RunManifest m;
    m.run_dir_ = run_dir;
    m.data_ = json::parse(read_file(run_dir / "manifest.json"));
    if (m.data_.value("magic", "") != kManifestMagic) {
        throw std::invalid_argument("'" + (run_dir / "manifest.json").string() + "' is not a run manifest.");
    }
    return m;
}

}  // namespace fractonlab
