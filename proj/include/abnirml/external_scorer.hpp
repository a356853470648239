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

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "abnirml/scorer.hpp"

namespace abnirml {

inline constexpr std::string_view kScorerProtocol = "abnirml-scorer/1";

/// Client side of the line-delimited JSON scorer protocol.
///
/// The scorer announces itself with
///   {"protocol":"abnirml-scorer/1","name":<string>}
/// and then answers each request line {"id","q","d"} with {"id","score"}.
/// Responses may arrive in any order; they are matched back by id. Up to
/// `window` requests are kept in flight. Closing our write side (EOF) ends the
/// session.
class ExternalScorer final : public Scorer {
  public:
    struct Options {
        std::chrono::milliseconds timeout{std::chrono::seconds(60)};
        std::chrono::milliseconds handshake_timeout{std::chrono::seconds(120)};
        std::size_t window = 256;
    };

    /// Runs `command` through /bin/sh and talks over its stdin/stdout.
    [[nodiscard]] static std::unique_ptr<ExternalScorer> spawn(std::string const& command, Options options);
    [[nodiscard]] static std::unique_ptr<ExternalScorer> connect(std::string const& host, std::uint16_t port,
                                                                 Options options);
    /// "host:port" connects over TCP; anything else is spawned as a command.
    [[nodiscard]] static std::unique_ptr<ExternalScorer> open(std::string const& target, Options options);

    ~ExternalScorer() override;
    ExternalScorer(ExternalScorer const&) = delete;
    ExternalScorer& operator=(ExternalScorer const&) = delete;

    [[nodiscard]] std::string const& id() const override { return m_id; }
    [[nodiscard]] std::string const& name() const noexcept { return m_name; }
    [[nodiscard]] std::vector<double> score_batch(std::span<ScoreRequest const> requests) override;

  private:
    ExternalScorer(int read_fd, int write_fd, pid_t child, Options options);

    void handshake();
    /// Pops one complete line from the read buffer, reading more as needed.
    /// Returns false on EOF.
    bool read_line(std::string& line, std::chrono::milliseconds timeout);
    void close_streams() noexcept;

    int m_read_fd;
    int m_write_fd;
    pid_t m_child;
    Options m_options;
    std::string m_buffer;
    std::string m_name;
    std::string m_id;
    std::uint64_t m_batches = 0;
};

}  // namespace abnirml
