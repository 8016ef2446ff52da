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

#include "qoffload/runtime.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qoffload/qasm.hpp"

namespace qoffload::rt {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// DepGraph

void DepGraph::add_edge(int from, int to) {
    if (from == to)
        return;
    nodes_[from].succs.push_back(to);
    nodes_[to].preds.push_back(from);
    if (!nodes_[from].finished)
        ++nodes_[to].unreleased;
}

int DepGraph::add_task(const std::vector<Access> &accesses) {
    int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    std::set<int> preds;
    for (const auto &a : accesses) {
        auto &h = handles_[a.handle];
        switch (a.mode) {
        case Mode::In:
            preds.insert(h.writers.begin(), h.writers.end());
            h.readers_since.push_back(id);
            break;
        case Mode::Out:
        case Mode::InOut:
            preds.insert(h.writers.begin(), h.writers.end());
            preds.insert(h.readers_since.begin(), h.readers_since.end());
            h.writers = {id};
            h.writers_accumulate = false;
            h.readers_since.clear();
            break;
        case Mode::Accumulate:
            if (!h.writers_accumulate) {
                // Open a group: every member depends on the previous writer
                // and on the readers seen since, but not on each other.
                h.acc_base = h.writers;
                h.acc_base.insert(h.acc_base.end(), h.readers_since.begin(),
                                  h.readers_since.end());
                h.writers.clear();
                h.readers_since.clear();
                h.writers_accumulate = true;
            }
            preds.insert(h.acc_base.begin(), h.acc_base.end());
            preds.insert(h.readers_since.begin(), h.readers_since.end());
            h.writers.push_back(id);
            break;
        }
    }
    for (int p : preds)
        add_edge(p, id);
    return id;
}

void DepGraph::mark_finished(int id) {
    if (nodes_[id].finished)
        return;
    nodes_[id].finished = true;
    for (int s : nodes_[id].succs)
        --nodes_[s].unreleased;
}

std::vector<int> DepGraph::compute_ready() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(nodes_.size()); ++i)
        if (!nodes_[i].finished && nodes_[i].unreleased == 0)
            out.push_back(i);
    return out;
}

// ---------------------------------------------------------------------------
// Runtime

namespace {

std::vector<std::string> split_csv(const std::string &text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

} // namespace

Runtime::Runtime(RuntimeConfig config) : config_(std::move(config)) {
    if (config_.backends.empty())
        if (const char *env = std::getenv("QOFFLOAD_BACKEND"))
            config_.backends = split_csv(env);
    if (config_.qasm_dir == "./qasm")
        if (const char *env = std::getenv("QOFFLOAD_QASM_DIR"))
            config_.qasm_dir = env;
    if (const char *env = std::getenv("QOFFLOAD_POLL_MS"))
        if (config_.poll_ms == 10)
            config_.poll_ms = std::max(1, std::atoi(env));
    if (config_.workers < 1)
        config_.workers = 1;

    for (const auto &addr : config_.backends) {
        auto [host, port] = net::parse_host_port(addr);
        auto link = std::make_unique<BackendLink>();
        link->host = host;
        link->port = port;
        links_.push_back(std::move(link));
    }

    for (int i = 0; i < config_.workers; ++i)
        workers_.emplace_back([this] { worker_loop(); });
    poller_ = std::thread([this] { poller_loop(); });
}

Runtime::~Runtime() {
    {
        std::lock_guard<std::mutex> lock(mu_);
        stopping_ = true;
    }
    ready_cv_.notify_all();
    for (auto &w : workers_)
        if (w.joinable())
            w.join();
    if (poller_.joinable())
        poller_.join();
}

int Runtime::register_handle(const std::string &name) {
    std::lock_guard<std::mutex> lock(handles_mu_);
    auto cell = std::make_unique<HandleCell>();
    cell->name = name;
    handles_.push_back(std::move(cell));
    return static_cast<int>(handles_.size()) - 1;
}

Runtime::HandleCell &Runtime::cell_at(int handle) {
    std::lock_guard<std::mutex> lock(handles_mu_);
    if (handle < 0 || handle >= static_cast<int>(handles_.size()))
        throw UnknownHandle("handle " + std::to_string(handle) + " is not registered");
    return *handles_[handle];
}

void Runtime::record_event(Event::Kind kind, int task_id, std::uint64_t job_id) {
    std::lock_guard<std::mutex> lock(events_mu_);
    events_.push_back({kind, task_id, job_id, std::chrono::steady_clock::now()});
}

std::vector<Runtime::Event> Runtime::events() const {
    std::lock_guard<std::mutex> lock(events_mu_);
    return events_;
}

int Runtime::spawn_host_task(const std::vector<Access> &accesses, std::function<void()> work) {
    for (const auto &a : accesses)
        cell_at(a.handle);
    std::unique_lock<std::mutex> lock(mu_);
    int id = graph_.add_task(accesses);
    Task task;
    task.kind = TaskKind::Host;
    task.work = std::move(work);
    tasks_.push_back(std::move(task));
    ++alive_;
    for (int p : graph_.predecessors(id))
        if (tasks_[p].state == TaskState::Failed && tasks_[id].poison.empty())
            tasks_[id].poison = tasks_[p].poison;
    if (graph_.unreleased_count(id) == 0) {
        if (!tasks_[id].poison.empty()) {
            std::string poison = tasks_[id].poison;
            fail_task_locked(id, poison, lock);
        } else {
            tasks_[id].state = TaskState::Ready;
            ready_.push_back(id);
            ready_cv_.notify_one();
        }
    }
    return id;
}

int Runtime::spawn_qpu_task(const QpuTaskSpec &spec, const std::vector<Access> &accesses) {
    if (spec.kernel_name.empty() && (!spec.extension || spec.extension->empty()))
        throw RuntimeError("QPU task needs a kernel name or a non-empty extension");
    bool result_writable = false;
    for (const auto &a : accesses)
        if (a.handle == spec.result_handle &&
            (a.mode == Mode::Out || a.mode == Mode::InOut))
            result_writable = true;
    if (!result_writable)
        throw RuntimeError("result handle must appear in the accesses with mode out or inout");
    for (const auto &a : accesses)
        cell_at(a.handle);

    std::unique_lock<std::mutex> lock(mu_);
    int id = graph_.add_task(accesses);
    Task task;
    task.kind = TaskKind::Qpu;
    task.spec = spec;
    tasks_.push_back(std::move(task));
    ++alive_;
    for (int p : graph_.predecessors(id))
        if (tasks_[p].state == TaskState::Failed && tasks_[id].poison.empty())
            tasks_[id].poison = tasks_[p].poison;
    if (graph_.unreleased_count(id) == 0) {
        if (!tasks_[id].poison.empty()) {
            std::string poison = tasks_[id].poison;
            fail_task_locked(id, poison, lock);
        } else {
            tasks_[id].state = TaskState::Ready;
            ready_.push_back(id);
            ready_cv_.notify_one();
        }
    }
    return id;
}

void Runtime::finish_task_locked(int id, std::unique_lock<std::mutex> &lock) {
    tasks_[id].state = TaskState::Finished;
    record_event(Event::Kind::TaskFinished, id);
    graph_.mark_finished(id);
    --alive_;
    std::deque<int> poisoned;
    for (int s : graph_.successors(id)) {
        if (tasks_[s].state != TaskState::Created)
            continue;
        if (graph_.unreleased_count(s) == 0) {
            if (!tasks_[s].poison.empty()) {
                poisoned.push_back(s);
            } else {
                tasks_[s].state = TaskState::Ready;
                ready_.push_back(s);
                ready_cv_.notify_one();
            }
        }
    }
    for (int s : poisoned) {
        std::string poison = tasks_[s].poison;
        fail_task_locked(s, poison, lock);
    }
    if (alive_ == 0)
        done_cv_.notify_all();
}

void Runtime::fail_task_locked(int id, const std::string &message,
                               std::unique_lock<std::mutex> &lock) {
    tasks_[id].state = TaskState::Failed;
    tasks_[id].poison = message;
    if (first_failure_.empty())
        first_failure_ = "task " + std::to_string(id) + " failed: " + message;
    record_event(Event::Kind::TaskFailed, id);
    graph_.mark_finished(id);
    --alive_;
    std::deque<int> released;
    for (int s : graph_.successors(id)) {
        if (tasks_[s].state != TaskState::Created)
            continue;
        if (tasks_[s].poison.empty())
            tasks_[s].poison = message + " (poisoning task " + std::to_string(s) + ")";
        if (graph_.unreleased_count(s) == 0)
            released.push_back(s);
    }
    for (int s : released) {
        if (tasks_[s].state != TaskState::Created)
            continue;
        std::string poison = tasks_[s].poison;
        fail_task_locked(s, poison, lock);
    }
    if (alive_ == 0)
        done_cv_.notify_all();
}

void Runtime::taskwait() {
    std::unique_lock<std::mutex> lock(mu_);
    done_cv_.wait(lock, [this] { return alive_ == 0; });
    if (!first_failure_.empty()) {
        std::string msg = first_failure_;
        first_failure_.clear();
        throw TaskFailed(msg);
    }
}

void Runtime::worker_loop() {
    for (;;) {
        int id;
        {
            std::unique_lock<std::mutex> lock(mu_);
            ready_cv_.wait(lock, [this] { return stopping_ || !ready_.empty(); });
            if (stopping_)
                return;
            id = ready_.front();
            ready_.pop_front();
            tasks_[id].state = TaskState::Running;
        }
        record_event(Event::Kind::TaskStarted, id);
        if (tasks_[id].kind == TaskKind::Host)
            execute_host(id);
        else
            execute_qpu(id);
    }
}

void Runtime::execute_host(int id) {
    std::string failure;
    try {
        tasks_[id].work();
    } catch (const std::exception &e) {
        failure = e.what();
    } catch (...) {
        failure = "unknown exception";
    }
    std::unique_lock<std::mutex> lock(mu_);
    if (failure.empty())
        finish_task_locked(id, lock);
    else
        fail_task_locked(id, failure, lock);
}

std::string Runtime::prepare_source(const QpuTaskSpec &spec) {
    std::string source;
    if (!spec.kernel_name.empty()) {
        bool cached = false;
        if (config_.cache_kernels) {
            std::lock_guard<std::mutex> lock(cache_mu_);
            auto it = kernel_cache_.find(spec.kernel_name);
            if (it != kernel_cache_.end()) {
                source = it->second;
                cached = true;
            }
        }
        if (!cached) {
            std::string path = config_.qasm_dir + "/" + spec.kernel_name + ".qasm";
            std::ifstream in(path);
            if (!in)
                throw KernelFileNotFound("no kernel file at " + path);
            std::stringstream ss;
            ss << in.rdbuf();
            source = ss.str();
            if (config_.cache_kernels) {
                std::lock_guard<std::mutex> lock(cache_mu_);
                kernel_cache_[spec.kernel_name] = source;
            }
        }
    }
    if (spec.params)
        source = qasm::substitute_params(source, *spec.params);
    if (spec.extension && !spec.extension->empty())
        source = qasm::append_extension(source, *spec.extension, spec.empty_source_registers);
    if (source.empty())
        throw RuntimeError("QPU task resolved to empty source");
    return source;
}

void Runtime::execute_qpu(int id) {
    std::string failure;
    std::uint64_t job_id = 0;
    std::size_t link_idx = 0;
    try {
        std::string source = prepare_source(tasks_[id].spec);
        if (links_.empty())
            throw BackendUnreachable("no backend configured (set QOFFLOAD_BACKEND)");
        link_idx = next_link_.fetch_add(1) % links_.size();
        json req{{"type", "submit"},
                 {"shots", tasks_[id].spec.shots},
                 {"qasm", source}};
        json resp = json::parse(request(link_idx, req.dump()));
        if (resp.value("type", "") == "job_id") {
            job_id = resp["id"];
            record_event(Event::Kind::JobSubmitted, id, job_id);
        } else {
            failure = resp.value("message", "backend rejected the job");
        }
    } catch (const std::exception &e) {
        failure = e.what();
    }

    std::unique_lock<std::mutex> lock(mu_);
    if (!failure.empty()) {
        fail_task_locked(id, failure, lock);
        return;
    }
    tasks_[id].state = TaskState::Offloaded;
    outstanding_.push_back({job_id, id, link_idx});
}

std::string Runtime::request(std::size_t link_idx, const std::string &line) {
    BackendLink &link = *links_[link_idx];
    std::lock_guard<std::mutex> lock(link.mu);
    int backoff = config_.backoff_ms;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
            backoff *= 2;
        }
        try {
            if (!link.conn.valid())
                link.conn = net::TcpConn::connect(link.host, link.port);
        } catch (const net::NetError &) {
            continue;
        }
        if (!link.conn.send_line(line)) {
            link.conn.close();
            continue;
        }
        std::string response;
        if (link.conn.recv_line(response) == net::TcpConn::RecvStatus::Ok)
            return response;
        link.conn.close();
    }
    throw BackendUnreachable("backend " + link.host + ":" + std::to_string(link.port) +
                             " unreachable after " + std::to_string(config_.retries + 1) +
                             " attempts");
}

void Runtime::poller_loop() {
    for (;;) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            if (stopping_)
                return;
        }
        std::vector<OutstandingJob> snapshot;
        {
            std::lock_guard<std::mutex> lock(mu_);
            snapshot = outstanding_;
        }
        for (const auto &job : snapshot) {
            std::string failure;
            std::optional<sim::Counts> counts;
            bool done = false;
            try {
                json req{{"type", "status"}, {"id", job.job_id}};
                json resp = json::parse(request(job.link, req.dump()));
                record_event(Event::Kind::StatusPolled, job.task_id, job.job_id);
                std::string status = resp.value("status", "");
                if (resp.value("type", "") == "error") {
                    failure = resp.value("message", "status query failed");
                } else if (status == "completed" || status == "failed") {
                    json rreq{{"type", "result"}, {"id", job.job_id}};
                    json rresp = json::parse(request(job.link, rreq.dump()));
                    record_event(Event::Kind::ResultFetched, job.task_id, job.job_id);
                    if (rresp.value("type", "") == "result") {
                        sim::Counts c;
                        for (auto &[key, value] : rresp["counts"].items())
                            c[key] = value.get<std::uint64_t>();
                        counts = std::move(c);
                    } else {
                        failure = rresp.value("message", "job failed");
                    }
                    done = true;
                }
            } catch (const std::exception &e) {
                failure = e.what();
                done = true;
            }
            if (!done && failure.empty())
                continue;

            if (counts) {
                int handle = tasks_[job.task_id].spec.result_handle;
                put(handle, std::move(*counts));
            }
            std::unique_lock<std::mutex> lock(mu_);
            outstanding_.erase(std::remove_if(outstanding_.begin(), outstanding_.end(),
                                              [&](const OutstandingJob &o) {
                                                  return o.task_id == job.task_id;
                                              }),
                               outstanding_.end());
            if (failure.empty())
                finish_task_locked(job.task_id, lock);
            else
                fail_task_locked(job.task_id, failure, lock);
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(config_.poll_ms));
    }
}

} // namespace qoffload::rt
