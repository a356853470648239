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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace abnirml {

/// 64-bit FNV-1a. Used wherever a hash must be identical across platforms and
/// languages (per-sample RNG derivation, cache file naming).
[[nodiscard]] constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                              std::uint64_t basis = 0xcbf29ce484222325ULL) noexcept
{
    std::uint64_t h = basis;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Hash of several fields, each terminated by a NUL byte so that
/// ("ab", "c") and ("a", "bc") hash differently.
[[nodiscard]] std::uint64_t fnv1a64_fields(std::initializer_list<std::string_view> fields) noexcept;

[[nodiscard]] std::string sha256_hex(std::string_view bytes);
[[nodiscard]] std::string sha256_file(std::filesystem::path const& path);

/// Unicode NFC normalization. Throws ParseError on ill-formed UTF-8.
[[nodiscard]] std::string nfc(std::string_view utf8);
[[nodiscard]] bool is_valid_utf8(std::string_view bytes) noexcept;

[[nodiscard]] std::string_view trim(std::string_view s) noexcept;
[[nodiscard]] std::vector<std::string_view> split_ws(std::string_view s);

/// Calls fn(line, line_number) for every line; strips a trailing CR.
/// Throws IoError if the file cannot be opened.
void for_each_line(std::filesystem::path const& path,
                   std::function<void(std::string_view, std::size_t)> const& fn);

[[nodiscard]] std::string read_file(std::filesystem::path const& path);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partially written output.
void write_file_atomic(std::filesystem::path const& path, std::string_view contents);

/// Shortest decimal representation that round-trips to the same double.
[[nodiscard]] std::string format_double(double value);

/// Unicode-aware lowercase (root locale).
[[nodiscard]] std::string lowercase(std::string_view utf8);

/// Runs fn(0) .. fn(n-1) on up to `jobs` threads. The first exception thrown
/// by any call is rethrown after all workers have stopped.
void parallel_for(std::size_t n, std::size_t jobs, std::function<void(std::size_t)> const& fn);

}  // namespace abnirml
