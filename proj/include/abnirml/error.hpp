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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace abnirml {

/// Process exit codes used by the command-line tool. Every library error maps
/// onto exactly one of these through Error::exit_code().
enum class ExitCode : int {
    kOk = 0,
    kValidation = 1,
    kIo = 2,
    kScorer = 3,
};

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual ExitCode exit_code() const noexcept { return ExitCode::kValidation; }
};

/// Malformed input. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
  public:
    ParseError(std::string const& what, std::string source = {}, std::size_t line = 0)
        : Error(format(what, source, line)), m_source(std::move(source)), m_line(line)
    {}
    [[nodiscard]] std::string const& source() const noexcept { return m_source; }
    [[nodiscard]] std::size_t line() const noexcept { return m_line; }

  private:
    static std::string format(std::string const& what, std::string const& source, std::size_t line)
    {
        if (source.empty()) {
            return what;
        }
        return source + (line > 0 ? ":" + std::to_string(line) : std::string{}) + ": " + what;
    }
    std::string m_source;
    std::size_t m_line;
};

class ValidationError : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
    [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::kIo; }
};

class CacheCorruptError : public IoError {
  public:
    using IoError::IoError;
};

/// Failures raised by a ranking function, native or external.
class ScorerError : public Error {
  public:
    explicit ScorerError(std::string const& what, std::string request_id = {})
        : Error(request_id.empty() ? what : what + " (request id " + request_id + ")"),
          m_request_id(std::move(request_id))
    {}
    [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::kScorer; }
    [[nodiscard]] std::string const& request_id() const noexcept { return m_request_id; }

  private:
    std::string m_request_id;
};

class HandshakeError : public ScorerError {
  public:
    using ScorerError::ScorerError;
};

class TimeoutError : public ScorerError {
  public:
    using ScorerError::ScorerError;
};

class MalformedResponseError : public ScorerError {
  public:
    using ScorerError::ScorerError;
};

/// The scorer closed its stream while requests were still outstanding.
class MissingResponseError : public ScorerError {
  public:
    using ScorerError::ScorerError;
};

/// A response carried an id that was never requested or was already answered.
class UnknownIdError : public ScorerError {
  public:
    using ScorerError::ScorerError;
};

}  // namespace abnirml
