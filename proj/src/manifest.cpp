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

#include "abnirml/manifest.hpp"

#include "abnirml/error.hpp"
#include "abnirml/util.hpp"

namespace abnirml {

namespace {

using nlohmann::json;

std::string relative_to(std::filesystem::path const& path, std::filesystem::path const& base)
{
    auto const abs = std::filesystem::weakly_canonical(std::filesystem::absolute(path));
    auto const abs_base = std::filesystem::weakly_canonical(std::filesystem::absolute(base));
    auto rel = abs.lexically_relative(abs_base);
    if (rel.empty()) {
        return abs.generic_string();
    }
    return rel.generic_string();
}

json files_to_json(std::vector<FileDigest> const& files)
{
    json out = json::array();
    for (auto const& f : files) {
        out.push_back({{"role", f.role}, {"path", f.path}, {"sha256", f.sha256}});
    }
    return out;
}

std::vector<FileDigest> files_from_json(json const& j)
{
    std::vector<FileDigest> out;
    for (auto const& f : j) {
        out.push_back({f.at("role").get<std::string>(), f.at("path").get<std::string>(),
                       f.at("sha256").get<std::string>()});
    }
    return out;
}

}  // namespace

void RunManifest::add_input(std::string role, std::filesystem::path const& path, std::filesystem::path const& base)
{
    inputs.push_back({std::move(role), relative_to(path, base), sha256_file(path)});
}

void RunManifest::add_output(std::filesystem::path const& path, std::filesystem::path const& base)
{
    outputs.push_back({"output", relative_to(path, base), sha256_file(path)});
}

json RunManifest::to_json() const
{
    return {{"tool", tool},
            {"version", version},
            {"command", command},
            {"parameters", parameters},
            {"inputs", files_to_json(inputs)},
            {"outputs", files_to_json(outputs)}};
}

RunManifest RunManifest::from_json(json const& j)
{
    RunManifest m;
    m.tool = j.at("tool").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.parameters = j.at("parameters");
    m.inputs = files_from_json(j.at("inputs"));
    m.outputs = files_from_json(j.at("outputs"));
    return m;
}

std::filesystem::path manifest_path_for(std::filesystem::path const& output)
{
    auto p = output;
    p += ".manifest.json";
    return p;
}

void write_manifest(RunManifest manifest, std::filesystem::path const& output)
{
    auto const path = manifest_path_for(output);
    auto base = path.parent_path();
    if (base.empty()) {
        base = ".";
    }
    manifest.add_output(output, base);
    write_file_atomic(path, manifest.to_json().dump(2) + "\n");
}

RunManifest load_manifest(std::filesystem::path const& path)
{
    auto const text = read_file(path);
    try {
        return RunManifest::from_json(json::parse(text));
    } catch (json::exception const& e) {
        throw ParseError(std::string("invalid manifest: ") + e.what(), path.string());
    }
}

VerifyResult verify_manifest(std::filesystem::path const& path)
{
    VerifyResult result;
    RunManifest manifest;
    try {
        manifest = load_manifest(path);
    } catch (Error const& e) {
        result.ok = false;
        result.problems.emplace_back(e.what());
        return result;
    }
    auto base = path.parent_path();
    if (base.empty()) {
        base = ".";
    }
    auto check = [&](FileDigest const& f) {
        auto const file = std::filesystem::path(f.path).is_absolute() ? std::filesystem::path(f.path) : base / f.path;
        if (!std::filesystem::exists(file)) {
            result.ok = false;
            result.problems.push_back("missing " + f.role + " file: " + f.path);
            return;
        }
        if (sha256_file(file) != f.sha256) {
            result.ok = false;
            result.problems.push_back("changed " + f.role + " file: " + f.path);
        }
    };
    for (auto const& f : manifest.inputs) {
        check(f);
    }
    for (auto const& f : manifest.outputs) {
        check(f);
    }
    return result;
}

}  // namespace abnirml
