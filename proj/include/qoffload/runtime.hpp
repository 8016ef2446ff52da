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
 * Dataflow task runtime. Host tasks run on a worker pool; QPU tasks are
 * offloaded asynchronously to a backend and completed by a poller thread
 * that releases their dependents.
 *
 * Dataflow rules: a reader depends on the last writer of each in/inout
 * handle; a writer depends on the last writer and on every reader since it.
 * Accumulate accesses act as writers toward readers/writers but carry no
 * edges among themselves; combining operations must be commutative and
 * associative.
 */

#pragma once

#include <any>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qoffload/net.hpp"
#include "qoffload/sim.hpp"

namespace qoffload::rt {

struct RuntimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownHandle : RuntimeError {
    using RuntimeError::RuntimeError;
};
struct KernelFileNotFound : RuntimeError {
    using RuntimeError::RuntimeError;
};
struct BackendUnreachable : RuntimeError {
    using RuntimeError::RuntimeError;
};
/// Raised by taskwait with the first task failure and its cause chain.
struct TaskFailed : RuntimeError {
    using RuntimeError::RuntimeError;
};

enum class Mode { In, Out, InOut, Accumulate };

struct Access {
    int handle;
    Mode mode;
};

struct QpuTaskSpec {
    std::string kernel_name; // file stem under the qasm dir; may be empty
    std::uint64_t shots = 1;
    std::optional<std::vector<double>> params;
    std::optional<std::string> extension;
    int result_handle = -1;
    /// Register width of the canonical header when the source is empty.
    int empty_source_registers = 1;
};

/// Dependency graph with the dataflow edge rules. Standalone so schedulers
/// and tests share one implementation.
class DepGraph {
  public:
    /// Adds a task and computes its edges from the access list.
    int add_task(const std::vector<Access> &accesses);

    void mark_finished(int id);
    bool is_finished(int id) const { return nodes_[id].finished; }

    /// Tasks with no unreleased predecessor edge that have not finished.
    std::vector<int> compute_ready() const;

    const std::vector<int> &predecessors(int id) const { return nodes_[id].preds; }
    const std::vector<int> &successors(int id) const { return nodes_[id].succs; }
    int unreleased_count(int id) const { return nodes_[id].unreleased; }
    int size() const { return static_cast<int>(nodes_.size()); }

  private:
    struct Node {
        std::vector<int> preds;
        std::vector<int> succs;
        int unreleased = 0;
        bool finished = false;
    };
    struct HandleState {
        std::vector<int> writers;   // last writer, or current accumulator group
        bool writers_accumulate = false;
        std::vector<int> readers_since;
        std::vector<int> acc_base; // predecessors shared by the open accumulator group
    };
    void add_edge(int from, int to);

    std::vector<Node> nodes_;
    std::map<int, HandleState> handles_;
};

struct RuntimeConfig {
    std::vector<std::string> backends; // HOST:PORT, jobs dispatched round-robin
    std::string qasm_dir = "./qasm";
    int poll_ms = 10;
    int workers = 4;
    int retries = 5;     // reconnect attempts per request
    int backoff_ms = 100; // initial backoff, doubled per retry
    bool cache_kernels = false;
};

class Runtime {
  public:
    /// Unset fields fall back to QOFFLOAD_BACKEND, QOFFLOAD_QASM_DIR and
    /// QOFFLOAD_POLL_MS.
    explicit Runtime(RuntimeConfig config);
    ~Runtime();

    Runtime(const Runtime &) = delete;
    Runtime &operator=(const Runtime &) = delete;

    int register_handle(const std::string &name);

    template <typename T> void put(int handle, T value) {
        auto &cell = cell_at(handle);
        std::lock_guard<std::mutex> lock(cell.mu);
        cell.value = std::move(value);
    }

    template <typename T> T get(int handle) {
        auto &cell = cell_at(handle);
        std::lock_guard<std::mutex> lock(cell.mu);
        if (!cell.value.has_value())
            return T{};
        return std::any_cast<T>(cell.value);
    }

    /// Read-modify-write under the handle's lock.
    template <typename T> void update(int handle, const std::function<void(T &)> &fn) {
        auto &cell = cell_at(handle);
        std::lock_guard<std::mutex> lock(cell.mu);
        if (!cell.value.has_value())
            cell.value = T{};
        fn(*std::any_cast<T>(&cell.value));
    }

    int spawn_host_task(const std::vector<Access> &accesses, std::function<void()> work);
    int spawn_qpu_task(const QpuTaskSpec &spec, const std::vector<Access> &accesses);

    /// Returns once every previously spawned task has finished; rethrows the
    /// first task failure as TaskFailed.
    void taskwait();

    struct Event {
        enum class Kind {
            TaskStarted,
            TaskFinished,
            TaskFailed,
            JobSubmitted,
            StatusPolled,
            ResultFetched,
        };
        Kind kind;
        int task_id;
        std::uint64_t job_id; // 0 unless a job event
        std::chrono::steady_clock::time_point time;
    };

    std::vector<Event> events() const;

  private:
    enum class TaskState { Created, Ready, Running, Offloaded, Finished, Failed };
    enum class TaskKind { Host, Qpu };

    struct Task {
        TaskKind kind;
        TaskState state = TaskState::Created;
        std::function<void()> work;
        QpuTaskSpec spec;
        std::string poison; // failure inherited from a predecessor
    };

    struct HandleCell {
        std::string name;
        std::any value;
        std::mutex mu;
    };

    struct BackendLink {
        std::string host;
        int port;
        std::mutex mu;
        net::TcpConn conn;
    };

    struct OutstandingJob {
        std::uint64_t job_id;
        int task_id;
        std::size_t link;
    };

    HandleCell &cell_at(int handle);
    void worker_loop();
    void poller_loop();
    void execute_host(int id);
    void execute_qpu(int id);
    std::string prepare_source(const QpuTaskSpec &spec);
    std::string request(std::size_t link_idx, const std::string &line);
    void finish_task_locked(int id, std::unique_lock<std::mutex> &lock);
    void fail_task_locked(int id, const std::string &message,
                          std::unique_lock<std::mutex> &lock);
    void record_event(Event::Kind kind, int task_id, std::uint64_t job_id = 0);

    RuntimeConfig config_;
    std::vector<std::unique_ptr<BackendLink>> links_;
    std::atomic<std::size_t> next_link_{0};

    mutable std::mutex mu_;
    std::condition_variable ready_cv_;
    std::condition_variable done_cv_;
    DepGraph graph_;
    std::deque<Task> tasks_; // deque: stable references across spawns
    std::deque<int> ready_;
    std::vector<OutstandingJob> outstanding_;
    int alive_ = 0;
    std::string first_failure_;
    bool stopping_ = false;

    std::vector<std::unique_ptr<HandleCell>> handles_;
    std::mutex handles_mu_;

    std::map<std::string, std::string> kernel_cache_;
    std::mutex cache_mu_;

    mutable std::mutex events_mu_;
    std::vector<Event> events_;

    std::vector<std::thread> workers_;
    std::thread poller_;
};

} // namespace qoffload::rt
