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

#include "qoffload/backend.hpp"

#include <json.hpp>

#include "qoffload/transpile.hpp"

namespace qoffload::backend {

using json = nlohmann::json;

const char *status_name(JobStatus status) {
    switch (status) {
    case JobStatus::Queued: return "queued";
    case JobStatus::Running: return "running";
    case JobStatus::Completed: return "completed";
    case JobStatus::Failed: return "failed";
    }
    return "unknown";
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(const std::string &s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string error_response(const char *code, const std::string &message) {
    return json{{"type", "error"}, {"code", code}, {"message", message}}.dump();
}

} // namespace

BackendServer::BackendServer(BackendConfig config) : config_(std::move(config)) {}

BackendServer::~BackendServer() { stop(); }

void BackendServer::start() {
    listener_ = net::TcpListener::bind(config_.port);
    port_ = listener_.port();
    accept_thread_ = std::thread([this] { accept_loop(); });
    worker_thread_ = std::thread([this] { worker_loop(); });
}

void BackendServer::stop() {
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (stopping_)
            return;
        stopping_ = true;
    }
    queue_cv_.notify_all();
    listener_.shutdown();
    if (accept_thread_.joinable())
        accept_thread_.join();
    if (worker_thread_.joinable())
        worker_thread_.join();
    std::lock_guard<std::mutex> lock(conn_mu_);
    for (auto &t : conn_threads_)
        if (t.joinable())
            t.join();
    conn_threads_.clear();
}

std::vector<JobTimes> BackendServer::job_times() const {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<JobTimes> out;
    out.reserve(jobs_.size());
    for (const auto &[id, job] : jobs_)
        out.push_back({id, job.status, job.submitted_at, job.started_at, job.finished_at});
    return out;
}

void BackendServer::accept_loop() {
    for (;;) {
        net::TcpConn conn = listener_.accept();
        if (!conn.valid())
            return; // listener shut down
        conn.set_recv_timeout(200);
        std::lock_guard<std::mutex> lock(conn_mu_);
        conn_threads_.emplace_back(
            [this](net::TcpConn c) { serve_connection(std::move(c)); }, std::move(conn));
    }
}

void BackendServer::serve_connection(net::TcpConn conn) {
    std::string line;
    for (;;) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            if (stopping_)
                return;
        }
        auto status = conn.recv_line(line, config_.max_line_bytes);
        switch (status) {
        case net::TcpConn::RecvStatus::Timeout:
            continue;
        case net::TcpConn::RecvStatus::Closed:
            return;
        case net::TcpConn::RecvStatus::TooLong:
            if (!conn.send_line(error_response("PayloadTooLarge",
                                               "request line exceeds the size cap")))
                return;
            continue;
        case net::TcpConn::RecvStatus::Ok:
            if (!conn.send_line(handle_request(line)))
                return;
            continue;
        }
    }
}

std::string BackendServer::handle_request(const std::string &line) {
    json req = json::parse(line, nullptr, false);
    if (req.is_discarded() || !req.is_object() || !req.contains("type") ||
        !req["type"].is_string())
        return error_response("MalformedRequest", "expected a JSON object with a \"type\" field");
    const std::string type = req["type"];

    if (type == "submit") {
        if (!req.contains("shots") || !req["shots"].is_number_unsigned() ||
            !req.contains("qasm") || !req["qasm"].is_string())
            return error_response("MalformedRequest",
                                  "submit requires unsigned \"shots\" and string \"qasm\"");
        std::uint64_t shots = req["shots"];
        std::string qasm = req["qasm"];
        if (shots < 1 || shots > config_.max_shots)
            return error_response("ShotsOutOfRange",
                                  "shots must be in [1, " +
                                      std::to_string(config_.max_shots) + "]");
        if (qasm.empty())
            return error_response("MalformedRequest", "qasm must be non-empty");
        std::uint64_t id;
        {
            std::lock_guard<std::mutex> lock(mu_);
            id = next_id_++;
            JobRecord job;
            job.id = id;
            job.shots = shots;
            job.qasm = std::move(qasm);
            job.submitted_at = std::chrono::steady_clock::now();
            jobs_.emplace(id, std::move(job));
            pending_.push_back(id);
        }
        queue_cv_.notify_one();
        return json{{"type", "job_id"}, {"id", id}}.dump();
    }

    if (type == "status" || type == "result") {
        if (!req.contains("id") || !req["id"].is_number_unsigned())
            return error_response("MalformedRequest", "missing unsigned \"id\" field");
        std::uint64_t id = req["id"];
        std::lock_guard<std::mutex> lock(mu_);
        auto it = jobs_.find(id);
        if (it == jobs_.end())
            return error_response("UnknownJob", "no job with id " + std::to_string(id));
        const JobRecord &job = it->second;
        if (type == "status")
            return json{{"type", "status"}, {"id", id}, {"status", status_name(job.status)}}
                .dump();
        if (job.status == JobStatus::Failed)
            return error_response("JobFailed", job.error_message.value_or("job failed"));
        if (job.status != JobStatus::Completed)
            return error_response("NotCompleted",
                                  "job " + std::to_string(id) + " is " +
                                      status_name(job.status));
        json counts = json::object();
        for (const auto &[key, count] : *job.counts)
            counts[key] = count;
        return json{{"type", "result"}, {"id", id}, {"counts", counts}}.dump();
    }

    return error_response("MalformedRequest", "unknown request type '" + type + "'");
}

void BackendServer::worker_loop() {
    for (;;) {
        std::uint64_t id;
        {
            std::unique_lock<std::mutex> lock(mu_);
            queue_cv_.wait(lock, [this] { return stopping_ || !pending_.empty(); });
            if (stopping_)
                return;
            id = pending_.front();
            pending_.pop_front();
            auto &job = jobs_.at(id);
            job.status = JobStatus::Running;
            job.started_at = std::chrono::steady_clock::now();
        }

        // Execute outside the lock; handlers stay responsive.
        std::uint64_t shots;
        std::string qasm;
        {
            std::lock_guard<std::mutex> lock(mu_);
            shots = jobs_.at(id).shots;
            qasm = jobs_.at(id).qasm;
        }
        if (config_.inject_latency_ms > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(config_.inject_latency_ms));

        sim::Counts counts;
        std::string error;
        try {
            qasm::Circuit circuit = qasm::parse(qasm);
            if (config_.transpile)
                circuit = transpile::transpile(circuit);
            std::uint64_t seed =
                splitmix64(config_.seed ^ fnv1a64(qasm) ^ (shots * 0xd1342543de82ef95ull));
            counts = sim::sample_counts(circuit, shots, seed,
                                        sim::SimConfig{config_.max_qubits});
        } catch (const std::exception &e) {
            error = e.what();
        }

        {
            std::lock_guard<std::mutex> lock(mu_);
            auto &job = jobs_.at(id);
            if (error.empty()) {
                job.counts = std::move(counts);
                job.status = JobStatus::Completed;
            } else {
                job.error_message = std::move(error);
                job.status = JobStatus::Failed;
            }
            job.finished_at = std::chrono::steady_clock::now();
        }
    }
}

} // namespace qoffload::backend
