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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qoffload/apps.hpp"
#include "qoffload/backend.hpp"
#include "qoffload/transpile.hpp"

namespace {

void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n')
            std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"qoffload: hybrid quantum-classical offloading examples"};
    app.require_subcommand(1);

    // run
    auto *run = app.add_subcommand("run", "run an example application");
    run->require_subcommand(1);
    qoffload::apps::RunConfig config;
    std::string backend_addr;
    std::string mode = "par";
    std::string output_path;
    std::uint64_t seed = 0x71b2c5d8e3f40917ull;
    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--shots", config.shots, "shots per circuit execution");
        cmd->add_option("--seed", seed,
                        "sampling seed for the in-process backend (ignored with --backend)");
        cmd->add_option("--backend", backend_addr,
                        "HOST:PORT of a running backend (default: spawn one in-process)");
        cmd->add_option("--qasm-dir", config.qasm_dir, "directory holding kernel .qasm files");
        cmd->add_option("-o,--output", output_path, "output file ('-' for stdout)");
    };
    auto *coin = run->add_subcommand("coin-flip", "single-qubit Hadamard sampling");
    add_common(coin);
    auto *landscape = run->add_subcommand("landscape", "energy landscape scan over an NxN grid");
    add_common(landscape);
    landscape->add_option("--grid", config.grid, "grid size N")->check(CLI::Range(2, 1024));
    landscape
        ->add_option("--mode", mode, "seq: taskwait per grid point; par: fully asynchronous")
        ->check(CLI::IsMember({"seq", "par"}));
    landscape->add_option("--hamiltonian", config.hamiltonian_path, "Pauli-sum file");
    auto *vqe = run->add_subcommand("vqe", "variational energy minimization");
    add_common(vqe);
    vqe->add_option("--hamiltonian", config.hamiltonian_path, "Pauli-sum file");
    vqe->add_option("--budget", config.budget, "optimizer evaluation budget");
    vqe->add_option("--ftol-rel", config.ftol_rel, "optimizer relative stopping tolerance");
    bool exact = false;
    vqe->add_flag("--exact", exact, "use the exact (infinite-shot) objective, no backend");

    // transpile
    auto *transpile = app.add_subcommand("transpile", "lower a QASM file to a gate set");
    std::string in_path, gateset = "rz,sx,cx";
    transpile->add_option("input", in_path, "input .qasm file (placeholder-free)")
        ->required()
        ->check(CLI::ExistingFile);
    transpile->add_option("--gateset", gateset, "comma-separated target gates");
    transpile->add_option("-o,--output", output_path, "output file ('-' for stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (transpile->parsed()) {
            std::ifstream in(in_path, std::ios::binary);
            std::stringstream buf;
            buf << in.rdbuf();
            auto circuit = qoffload::qasm::parse(buf.str(), in_path);
            auto lowered =
                qoffload::transpile::transpile(circuit, qoffload::transpile::GateSet::from_names(gateset));
            write_output(output_path, qoffload::qasm::serialize(lowered));
            return 0;
        }

        std::unique_ptr<qoffload::backend::BackendServer> local;
        bool needs_backend = !(vqe->parsed() && (exact || config.shots == 0));
        if (exact)
            config.shots = 0;
        if (needs_backend) {
            if (!backend_addr.empty()) {
                config.backends = {backend_addr};
            } else if (const char *env = std::getenv("QOFFLOAD_BACKEND")) {
                config.backends = {env};
            } else {
                qoffload::backend::BackendConfig bc;
                bc.port = 0;
                bc.seed = seed;
                local = std::make_unique<qoffload::backend::BackendServer>(bc);
                local->start();
                config.backends = {"127.0.0.1:" + std::to_string(local->port())};
            }
        }

        if (coin->parsed()) {
            auto report = qoffload::apps::cmd_coin_flip(config);
            write_output(output_path, qoffload::apps::coin_flip_json(report));
        } else if (landscape->parsed()) {
            config.parallel = (mode == "par");
            auto result = qoffload::apps::cmd_landscape(config);
            write_output(output_path, qoffload::apps::landscape_csv(result));
            std::cerr << "landscape: " << result.rows.size() << " points in "
                      << result.wall_seconds << " s (" << mode << ")\n";
        } else if (vqe->parsed()) {
            auto report = qoffload::apps::cmd_vqe(config);
            write_output(output_path, qoffload::apps::vqe_json(report));
        }
        if (local)
            local->stop();
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
