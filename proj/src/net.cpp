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

#include "qoffload/net.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>
#include <utility>

namespace qoffload::net {

namespace {

void set_timeout(int fd, int timeout_ms) {
    timeval tv{};
    tv.tv_sec = timeout_ms / 1000;
    tv.tv_usec = (timeout_ms % 1000) * 1000;
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

} // namespace

TcpConn::TcpConn(TcpConn &&other) noexcept : fd_(other.fd_), buf_(std::move(other.buf_)) {
    other.fd_ = -1;
}

TcpConn &TcpConn::operator=(TcpConn &&other) noexcept {
    if (this != &other) {
        close();
        fd_ = other.fd_;
        buf_ = std::move(other.buf_);
        other.fd_ = -1;
    }
    return *this;
}

TcpConn::~TcpConn() { close(); }

void TcpConn::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
    buf_.clear();
}

TcpConn TcpConn::connect(const std::string &host, int port, int timeout_ms) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0)
        throw NetError("socket: " + std::string(std::strerror(errno)));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(port));
    const char *target = host.empty() || host == "localhost" ? "127.0.0.1" : host.c_str();
    if (::inet_pton(AF_INET, target, &addr.sin_addr) != 1) {
        ::close(fd);
        throw NetError("unsupported host address: " + host);
    }
    if (::connect(fd, reinterpret_cast<sockaddr *>(&addr), sizeof(addr)) != 0) {
        int err = errno;
        ::close(fd);
        throw NetError("connect to " + host + ":" + std::to_string(port) + ": " +
                       std::strerror(err));
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    set_timeout(fd, timeout_ms);
    return TcpConn(fd);
}

void TcpConn::set_recv_timeout(int timeout_ms) {
    if (fd_ < 0)
        return;
    timeval tv{};
    tv.tv_sec = timeout_ms / 1000;
    tv.tv_usec = (timeout_ms % 1000) * 1000;
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
}

bool TcpConn::send_line(const std::string &line) {
    if (fd_ < 0)
        return false;
    std::string framed = line;
    framed += '\n';
    std::size_t sent = 0;
    while (sent < framed.size()) {
        ssize_t n = ::send(fd_, framed.data() + sent, framed.size() - sent, MSG_NOSIGNAL);
        if (n <= 0)
            return false;
        sent += static_cast<std::size_t>(n);
    }
    return true;
}

TcpConn::RecvStatus TcpConn::recv_line(std::string &line, std::size_t max_len) {
    bool overflow = false;
    for (;;) {
        auto nl = buf_.find('\n');
        if (nl != std::string::npos) {
            if (overflow || nl > max_len) {
                buf_.erase(0, nl + 1);
                return RecvStatus::TooLong;
            }
            line = buf_.substr(0, nl);
            buf_.erase(0, nl + 1);
            return RecvStatus::Ok;
        }
        if (buf_.size() > max_len) {
            // Drain the oversized line without buffering it all.
            buf_.clear();
            overflow = true;
        }
        char chunk[65536];
        ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
        if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK))
            return RecvStatus::Timeout;
        if (n <= 0)
            return RecvStatus::Closed;
        buf_.append(chunk, static_cast<std::size_t>(n));
    }
}

TcpListener::TcpListener(TcpListener &&other) noexcept : fd_(other.fd_), port_(other.port_) {
    other.fd_ = -1;
}

TcpListener &TcpListener::operator=(TcpListener &&other) noexcept {
    if (this != &other) {
        shutdown();
        fd_ = other.fd_;
        port_ = other.port_;
        other.fd_ = -1;
    }
    return *this;
}

TcpListener::~TcpListener() { shutdown(); }

TcpListener TcpListener::bind(int port) {
    TcpListener l;
    l.fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (l.fd_ < 0)
        throw NetError("socket: " + std::string(std::strerror(errno)));
    int one = 1;
    ::setsockopt(l.fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(static_cast<uint16_t>(port));
    if (::bind(l.fd_, reinterpret_cast<sockaddr *>(&addr), sizeof(addr)) != 0)
        throw NetError("bind port " + std::to_string(port) + ": " + std::strerror(errno));
    if (::listen(l.fd_, 64) != 0)
        throw NetError("listen: " + std::string(std::strerror(errno)));
    socklen_t len = sizeof(addr);
    ::getsockname(l.fd_, reinterpret_cast<sockaddr *>(&addr), &len);
    l.port_ = ntohs(addr.sin_port);
    return l;
}

TcpConn TcpListener::accept() {
    int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0)
        return TcpConn();
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return TcpConn(fd);
}

void TcpListener::shutdown() {
    if (fd_ >= 0) {
        ::shutdown(fd_, SHUT_RDWR);
        ::close(fd_);
        fd_ = -1;
    }
}

std::pair<std::string, int> parse_host_port(const std::string &address) {
    auto colon = address.rfind(':');
    if (colon == std::string::npos)
        throw NetError("expected HOST:PORT, got '" + address + "'");
    std::string host = address.substr(0, colon);
    int port = std::stoi(address.substr(colon + 1));
    return {host.empty() ? "127.0.0.1" : host, port};
}

} // namespace qoffload::net
