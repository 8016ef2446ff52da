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

#include <atomic>
#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "qoffload/backend.hpp"

namespace {
std::atomic<bool> g_stop{false};
void handle_signal(int) { g_stop = true; }
} // namespace

int main(int argc, char **argv) {
    CLI::App app{"qoffload backend: networked QASM simulator with a FIFO job queue"};
    qoffload::backend::BackendConfig config;
    app.add_option("--port", config.port, "TCP port (0 picks an ephemeral port)")
        ->default_val(9000);
    app.add_option("--max-qubits", config.max_qubits, "qubit cap per circuit")
        ->default_val(24);
    app.add_option("--max-shots", config.max_shots, "maximum shots per job")
        ->default_val(10'000'000);
    app.add_flag("--transpile", config.transpile, "lower circuits to the native gate set");
    app.add_option("--inject-latency-ms", config.inject_latency_ms,
                   "artificial per-job latency for experiments")
        ->default_val(0);
    app.add_option("--seed", config.seed, "base RNG seed for sampling");
    CLI11_PARSE(app, argc, argv);

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);

    qoffload::backend::BackendServer server(config);
    try {
        server.start();
    } catch (const std::exception &e) {
        std::cerr << "failed to start backend: " << e.what() << "\n";
        return 1;
    }
    std::cout << "qoffload backend listening on port " << server.port() << std::endl;
    while (!g_stop)
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    return 0;
}
