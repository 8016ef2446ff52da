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
 * The networked simulator backend: a TCP job queue speaking newline-delimited
 * JSON, with a single FIFO execution worker.
 *
 * Requests:  {"type":"submit","shots":N,"qasm":S}
 *            {"type":"status","id":I}
 *            {"type":"result","id":I}
 * Responses: {"type":"job_id","id":I}
 *            {"type":"status","id":I,"status":"queued|running|completed|failed"}
 *            {"type":"result","id":I,"counts":{...}}
 *            {"type":"error","code":CODE,"message":M}
 */

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qoffload/net.hpp"
#include "qoffload/sim.hpp"

namespace qoffload::backend {

enum class JobStatus { Queued, Running, Completed, Failed };

const char *status_name(JobStatus status);

struct JobRecord {
    std::uint64_t id = 0;
    std::uint64_t shots = 0;
    std::string qasm;
    JobStatus status = JobStatus::Queued;
    std::optional<sim::Counts> counts;
    std::optional<std::string> error_message;
    std::chrono::steady_clock::time_point submitted_at;
    std::chrono::steady_clock::time_point started_at;
    std::chrono::steady_clock::time_point finished_at;
};

struct BackendConfig {
    int port = 9000; // 0 binds an ephemeral port
    int max_qubits = 24;
    std::uint64_t max_shots = 10'000'000;
    bool transpile = false;
    int inject_latency_ms = 0;
    std::uint64_t seed = 0x71b2c5d8e3f40917ull;
    std::size_t max_line_bytes = 16 * 1024 * 1024;
};

/// Job snapshot for in-process inspection (tests, diagnostics).
struct JobTimes {
    std::uint64_t id;
    JobStatus status;
    std::chrono::steady_clock::time_point submitted_at;
    std::chrono::steady_clock::time_point started_at;
    std::chrono::steady_clock::time_point finished_at;
};

class BackendServer {
  public:
    explicit BackendServer(BackendConfig config);
    ~BackendServer();

    BackendServer(const BackendServer &) = delete;
    BackendServer &operator=(const BackendServer &) = delete;

    /// Binds the port and spawns the accept loop and the execution worker.
    void start();
    void stop();

    int port() const { return port_; }

    std::vector<JobTimes> job_times() const;

  private:
    void accept_loop();
    void worker_loop();
    void serve_connection(net::TcpConn conn);
    std::string handle_request(const std::string &line);
    void execute(JobRecord &job);

    BackendConfig config_;
    int port_ = 0;
    net::TcpListener listener_;

    mutable std::mutex mu_;
    std::condition_variable queue_cv_;
    std::map<std::uint64_t, JobRecord> jobs_;
    std::deque<std::uint64_t> pending_;
    std::uint64_t next_id_ = 1;
    bool stopping_ = false;

    std::thread accept_thread_;
    std::thread worker_thread_;
    std::vector<std::thread> conn_threads_;
    std::mutex conn_mu_;
};

} // namespace qoffload::backend
