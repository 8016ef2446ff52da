// Copyright 2026 The qoffload developers

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Minimal line-oriented TCP helpers for the newline-delimited JSON protocol.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace qoffload::net {

struct NetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Blocking line-framed TCP connection. Owns its socket.
class TcpConn {
  public:
    TcpConn() = default;
    explicit TcpConn(int fd) : fd_(fd) {}
    TcpConn(TcpConn &&other) noexcept;
    TcpConn &operator=(TcpConn &&other) noexcept;
    TcpConn(const TcpConn &) = delete;
    TcpConn &operator=(const TcpConn &) = delete;
    ~TcpConn();

    static TcpConn connect(const std::string &host, int port, int timeout_ms = 5000);

    bool valid() const { return fd_ >= 0; }
    void close();

    /// Receive timeout; recv_line reports Timeout when it elapses.
    void set_recv_timeout(int timeout_ms);

    /// Sends `line` plus a LF terminator. Returns false on a broken pipe.
    bool send_line(const std::string &line);

    enum class RecvStatus { Ok, Closed, TooLong, Timeout };

    /// Reads up to the next LF (stripped). Lines longer than `max_len` drain
    /// the rest of the oversized line and report TooLong.
    RecvStatus recv_line(std::string &line, std::size_t max_len = 16 * 1024 * 1024);

  private:
    int fd_ = -1;
    std::string buf_;
};

/// Listening socket; port 0 binds an ephemeral port.
class TcpListener {
  public:
    TcpListener() = default;
    TcpListener(TcpListener &&other) noexcept;
    TcpListener &operator=(TcpListener &&other) noexcept;
    TcpListener(const TcpListener &) = delete;
    ~TcpListener();

    static TcpListener bind(int port);

    int port() const { return port_; }
    bool valid() const { return fd_ >= 0; }

    /// Accepts one connection; invalid TcpConn when the listener was shut down.
    TcpConn accept();

    /// Unblocks a pending accept and closes the socket.
    void shutdown();

  private:
    int fd_ = -1;
    int port_ = 0;
};

/// Splits "host:port"; the host part may be omitted (defaults to 127.0.0.1).
std::pair<std::string, int> parse_host_port(const std::string &address);

} // namespace qoffload::net
