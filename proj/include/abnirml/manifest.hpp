// Copyright 2026 The abnirml Authors.
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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace abnirml {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct FileDigest {
    std::string role;  ///< e.g. "collection", "test", "output"
    std::string path;  ///< relative to the manifest's directory when possible
    std::string sha256;

    friend bool operator==(FileDigest const&, FileDigest const&) = default;
};

/// Everything needed to reproduce one output file: the command, its
/// parameters (scorer, delta source, seeds, PRNG, stopword digest) and the
/// content hashes of every input and output. No timestamps, so identical runs
/// give identical manifests.
struct RunManifest {
    std::string tool = "abnirml";
    std::string version = std::string(kToolVersion);
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::vector<FileDigest> inputs;
    std::vector<FileDigest> outputs;

    void add_input(std::string role, std::filesystem::path const& path, std::filesystem::path const& base);
    void add_output(std::filesystem::path const& path, std::filesystem::path const& base);

    [[nodiscard]] nlohmann::json to_json() const;
    [[nodiscard]] static RunManifest from_json(nlohmann::json const& j);

    friend bool operator==(RunManifest const&, RunManifest const&) = default;
};

/// `<output>.manifest.json`
[[nodiscard]] std::filesystem::path manifest_path_for(std::filesystem::path const& output);

/// Writes the manifest next to `output`, listing `output` itself.
void write_manifest(RunManifest manifest, std::filesystem::path const& output);
[[nodiscard]] RunManifest load_manifest(std::filesystem::path const& path);

struct VerifyResult {
    bool ok = true;
    std::vector<std::string> problems;
};

/// Re-hashes every input and output listed in the manifest at `path`.
[[nodiscard]] VerifyResult verify_manifest(std::filesystem::path const& path);

}  // namespace abnirml
