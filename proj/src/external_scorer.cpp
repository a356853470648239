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

#include "abnirml/external_scorer.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <mutex>
#include <optional>
#include <regex>
#include <thread>

#include <json.hpp>

#include "abnirml/error.hpp"
#include "abnirml/util.hpp"

extern char** environ;

namespace abnirml {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

void ignore_sigpipe()
{
    static std::once_flag once;
    std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

void set_nonblocking(int fd)
{
    int const flags = ::fcntl(fd, F_GETFL, 0);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

std::string excerpt(std::string_view line)
{
    constexpr std::size_t kMax = 120;
    return line.size() <= kMax ? std::string(line) : std::string(line.substr(0, kMax)) + "...";
}

}  // namespace

ExternalScorer::ExternalScorer(int read_fd, int write_fd, pid_t child, Options options)
    : m_read_fd(read_fd), m_write_fd(write_fd), m_child(child), m_options(options)
{
    if (m_options.window == 0) {
        m_options.window = 1;
    }
    set_nonblocking(m_read_fd);
    set_nonblocking(m_write_fd);
}

std::unique_ptr<ExternalScorer> ExternalScorer::spawn(std::string const& command, Options options)
{
    ignore_sigpipe();
    int to_child[2];
    int from_child[2];
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
        throw ScorerError("cannot create pipes for scorer: " + std::string(std::strerror(errno)));
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, to_child[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, from_child[1], STDOUT_FILENO);
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) {
        posix_spawn_file_actions_addclose(&actions, fd);
    }
    std::string shell = "/bin/sh";
    std::string flag = "-c";
    std::string cmd = command;
    char* argv[] = {shell.data(), flag.data(), cmd.data(), nullptr};
    pid_t pid = 0;
    int const rc = posix_spawn(&pid, "/bin/sh", &actions, nullptr, argv, environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(to_child[0]);
    ::close(from_child[1]);
    if (rc != 0) {
        ::close(to_child[1]);
        ::close(from_child[0]);
        throw ScorerError("cannot start scorer '" + command + "': " + std::strerror(rc));
    }
    ::fcntl(to_child[1], F_SETFD, FD_CLOEXEC);
    ::fcntl(from_child[0], F_SETFD, FD_CLOEXEC);
    std::unique_ptr<ExternalScorer> scorer(new ExternalScorer(from_child[0], to_child[1], pid, options));
    scorer->handshake();
    return scorer;
}

std::unique_ptr<ExternalScorer> ExternalScorer::connect(std::string const& host, std::uint16_t port, Options options)
{
    ignore_sigpipe();
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* found = nullptr;
    auto const service = std::to_string(port);
    if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &found); rc != 0) {
        throw ScorerError("cannot resolve scorer host " + host + ": " + ::gai_strerror(rc));
    }
    int fd = -1;
    for (auto* ai = found; ai != nullptr; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
        if (fd < 0) {
            continue;
        }
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
            break;
        }
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(found);
    if (fd < 0) {
        throw ScorerError("cannot connect to scorer at " + host + ":" + service);
    }
    int const write_fd = ::dup(fd);
    std::unique_ptr<ExternalScorer> scorer(new ExternalScorer(fd, write_fd, -1, options));
    scorer->handshake();
    return scorer;
}

std::unique_ptr<ExternalScorer> ExternalScorer::open(std::string const& target, Options options)
{
    static std::regex const kHostPort(R"(^([A-Za-z0-9.\-]+|\[[0-9A-Fa-f:]+\]):([0-9]{1,5})$)");
    std::smatch match;
    if (std::regex_match(target, match, kHostPort)) {
        auto host = match[1].str();
        if (host.front() == '[') {
            host = host.substr(1, host.size() - 2);
        }
        auto const port = std::stoul(match[2].str());
        if (port == 0 || port > 65535) {
            throw ConfigError("invalid scorer port in '" + target + "'");
        }
        return connect(host, static_cast<std::uint16_t>(port), options);
    }
    return spawn(target, options);
}

ExternalScorer::~ExternalScorer()
{
    close_streams();
    if (m_child > 0) {
        auto const deadline = Clock::now() + std::chrono::seconds(5);
        int status = 0;
        while (::waitpid(m_child, &status, WNOHANG) == 0) {
            if (Clock::now() > deadline) {
                ::kill(m_child, SIGKILL);
                ::waitpid(m_child, &status, 0);
                break;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(5));
        }
    }
}

void ExternalScorer::close_streams() noexcept
{
    if (m_write_fd >= 0) {
        ::shutdown(m_write_fd, SHUT_WR);
        ::close(m_write_fd);
        m_write_fd = -1;
    }
    if (m_read_fd >= 0) {
        ::close(m_read_fd);
        m_read_fd = -1;
    }
}

bool ExternalScorer::read_line(std::string& line, std::chrono::milliseconds timeout)
{
    auto const deadline = Clock::now() + timeout;
    while (true) {
        if (auto nl = m_buffer.find('\n'); nl != std::string::npos) {
            line.assign(m_buffer, 0, nl);
            m_buffer.erase(0, nl + 1);
            return true;
        }
        auto const remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
        if (remaining.count() <= 0) {
            throw TimeoutError("scorer did not answer within " + std::to_string(timeout.count()) + " ms");
        }
        pollfd pfd{m_read_fd, POLLIN, 0};
        int const rc = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
        if (rc < 0 && errno != EINTR) {
            throw ScorerError("poll failed: " + std::string(std::strerror(errno)));
        }
        if (rc <= 0) {
            continue;
        }
        char chunk[1 << 16];
        auto const n = ::read(m_read_fd, chunk, sizeof chunk);
        if (n == 0) {
            return false;
        }
        if (n < 0) {
            if (errno == EAGAIN || errno == EINTR) {
                continue;
            }
            return false;
        }
        m_buffer.append(chunk, static_cast<std::size_t>(n));
    }
}

void ExternalScorer::handshake()
{
    std::string line;
    bool got = false;
    try {
        got = read_line(line, m_options.handshake_timeout);
    } catch (TimeoutError const&) {
        throw HandshakeError("scorer sent no handshake within " + std::to_string(m_options.handshake_timeout.count()) +
                             " ms");
    }
    if (!got) {
        throw HandshakeError("scorer closed its output before the handshake");
    }
    json hello;
    try {
        hello = json::parse(line);
    } catch (json::exception const&) {
        throw HandshakeError("handshake is not JSON: " + excerpt(line));
    }
    if (!hello.is_object() || !hello.contains("protocol") || !hello["protocol"].is_string()) {
        throw HandshakeError("handshake lacks a protocol field: " + excerpt(line));
    }
    auto const protocol = hello["protocol"].get<std::string>();
    if (protocol != kScorerProtocol) {
        throw HandshakeError("unsupported scorer protocol '" + protocol + "', expected '" + std::string(kScorerProtocol) +
                             "'");
    }
    if (!hello.contains("name") || !hello["name"].is_string() || hello["name"].get<std::string>().empty()) {
        throw HandshakeError("handshake lacks a scorer name");
    }
    m_name = hello["name"].get<std::string>();
    m_id = "ext:" + m_name;
}

std::vector<double> ExternalScorer::score_batch(std::span<ScoreRequest const> requests)
{
    if (m_read_fd < 0 || m_write_fd < 0) {
        throw ScorerError("scorer session is closed");
    }
    auto const batch = m_batches++;
    auto const prefix = std::to_string(batch) + ":";
    auto request_id = [&](std::size_t i) { return prefix + std::to_string(i); };

    std::vector<std::optional<double>> scores(requests.size());
    std::size_t received = 0;
    std::size_t next = 0;
    std::size_t lowest_open = 0;
    std::string outgoing;
    std::size_t outgoing_pos = 0;

    auto fail = [&](auto error) {
        close_streams();
        throw error;
    };
    auto oldest_outstanding = [&] {
        while (lowest_open < next && scores[lowest_open]) {
            ++lowest_open;
        }
        return lowest_open < next ? request_id(lowest_open) : request_id(next);
    };
    auto handle_line = [&](std::string_view line) {
        if (trim(line).empty()) {
            return;
        }
        json response;
        try {
            response = json::parse(line);
        } catch (json::exception const&) {
            fail(MalformedResponseError("response is not JSON: " + excerpt(line)));
        }
        if (!response.is_object() || !response.contains("id") || !response["id"].is_string()) {
            fail(MalformedResponseError("response without a string id: " + excerpt(line)));
        }
        auto const id = response["id"].get<std::string>();
        if (response.contains("error")) {
            fail(ScorerError("scorer reported an error: " + response["error"].dump(), id));
        }
        if (!id.starts_with(prefix)) {
            fail(UnknownIdError("response for an id that was not requested", id));
        }
        std::size_t index = 0;
        auto const digits = std::string_view(id).substr(prefix.size());
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || index >= next) {
            fail(UnknownIdError("response for an id that was not requested", id));
        }
        if (scores[index]) {
            fail(UnknownIdError("duplicate response", id));
        }
        if (!response.contains("score") || !response["score"].is_number()) {
            fail(MalformedResponseError("response without a numeric score", id));
        }
        auto const score = response["score"].get<double>();
        if (!std::isfinite(score)) {
            fail(MalformedResponseError("non-finite score", id));
        }
        scores[index] = score;
        ++received;
    };

    auto last_progress = Clock::now();
    char chunk[1 << 16];
    while (received < requests.size()) {
        // Refill the outgoing buffer while the window allows.
        while (outgoing_pos == outgoing.size() && next < requests.size() && next - received < m_options.window) {
            json request = {{"id", request_id(next)},
                            {"q", std::string(requests[next].query)},
                            {"d", std::string(requests[next].doc)}};
            try {
                outgoing = request.dump() + '\n';
            } catch (json::exception const& e) {
                fail(ScorerError(std::string("cannot encode request: ") + e.what(), request_id(next)));
            }
            outgoing_pos = 0;
            ++next;
        }
        bool const want_write = outgoing_pos < outgoing.size();
        pollfd fds[2];
        nfds_t nfds = 0;
        fds[nfds++] = pollfd{m_read_fd, POLLIN, 0};
        if (want_write) {
            fds[nfds++] = pollfd{m_write_fd, POLLOUT, 0};
        }
        auto const remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
            last_progress + m_options.timeout - Clock::now());
        if (remaining.count() <= 0) {
            fail(TimeoutError("no response within " + std::to_string(m_options.timeout.count()) + " ms",
                              oldest_outstanding()));
        }
        int const rc = ::poll(fds, nfds, static_cast<int>(remaining.count()));
        if (rc < 0) {
            if (errno == EINTR) {
                continue;
            }
            fail(ScorerError("poll failed: " + std::string(std::strerror(errno))));
        }
        if (rc == 0) {
            continue;
        }
        if (want_write && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP)) != 0) {
            auto const n = ::write(m_write_fd, outgoing.data() + outgoing_pos, outgoing.size() - outgoing_pos);
            if (n > 0) {
                outgoing_pos += static_cast<std::size_t>(n);
                last_progress = Clock::now();
            } else if (n < 0 && errno != EAGAIN && errno != EINTR) {
                fail(MissingResponseError("scorer stopped reading requests (" + std::string(std::strerror(errno)) + ")",
                                          oldest_outstanding()));
            }
        }
        if ((fds[0].revents & (POLLIN | POLLHUP | POLLERR)) != 0) {
            auto const n = ::read(m_read_fd, chunk, sizeof chunk);
            if (n == 0) {
                fail(MissingResponseError("scorer closed its output with " + std::to_string(next - received) +
                                              " request(s) unanswered",
                                          oldest_outstanding()));
            }
            if (n < 0) {
                if (errno == EAGAIN || errno == EINTR) {
                    continue;
                }
                fail(MissingResponseError("read from scorer failed (" + std::string(std::strerror(errno)) + ")",
                                          oldest_outstanding()));
            }
            m_buffer.append(chunk, static_cast<std::size_t>(n));
            last_progress = Clock::now();
            std::size_t start = 0;
            for (auto nl = m_buffer.find('\n'); nl != std::string::npos; nl = m_buffer.find('\n', start)) {
                handle_line(std::string_view(m_buffer).substr(start, nl - start));
                start = nl + 1;
            }
            m_buffer.erase(0, start);
        }
    }

    std::vector<double> out;
    out.reserve(scores.size());
    for (auto const& s : scores) {
        out.push_back(*s);
    }
    return out;
}

}  // namespace abnirml
