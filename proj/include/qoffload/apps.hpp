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
 * The three end-to-end applications: coin flip, energy landscape scan, and
 * the variational minimization loop. Shared by the CLI and the acceptance
 * suite.
 */

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qoffload/observable.hpp"
#include "qoffload/qasm.hpp"
#include "qoffload/runtime.hpp"
#include "qoffload/sim.hpp"

namespace qoffload::apps {

struct RunConfig {
    std::vector<std::string> backends;
    std::uint64_t shots = 100'000;
    std::string qasm_dir = "./qasm";
    std::string hamiltonian_path; // empty: built-in Heisenberg-pair H
    int grid = 32;
    bool parallel = true;
    int budget = 300;
    double ftol_rel = 1e-4;
    int poll_ms = 10;
    int workers = 4;
};

/// The built-in 4-qubit Hamiltonian: XX+YY+ZZ couplings on qubit pairs
/// (0,1), (2,3) and (1,2). Shipped as hamiltonians/heisenberg4.txt.
observable::PauliSum default_hamiltonian();

observable::PauliSum load_hamiltonian(const RunConfig &config);

/// The 4-qubit mean-field ansatz with both rotation angles bound (the
/// in-memory twin of qasm/ansatz.qasm, used by the exact oracles).
qasm::Circuit ansatz_circuit(double theta0, double theta1);

struct CoinFlipReport {
    sim::Counts counts;
    double z_score; // |count0 - shots/2| in units of sqrt(shots/4)
};

CoinFlipReport cmd_coin_flip(const RunConfig &config);

std::string coin_flip_json(const CoinFlipReport &report);

struct LandscapeRow {
    double theta0;
    double theta1;
    double energy;
};

struct LandscapeResult {
    std::vector<LandscapeRow> rows; // grid-row-major, theta0 outer
    double wall_seconds = 0;
    std::vector<rt::Runtime::Event> events;
    std::map<int, int> qpu_task_point; // qpu task id -> flattened point index
};

LandscapeResult cmd_landscape(const RunConfig &config);

/// CSV with header theta0,theta1,energy and 17-significant-digit floats.
std::string landscape_csv(const LandscapeResult &result);

struct VqeReport {
    std::vector<double> best_theta;
    double best_energy = 0;
    int evaluations = 0;
    double exact_energy_at_best = 0;
};

/// Minimizes the estimated energy over [0, 2pi]^2 with DIRECT. shots == 0
/// switches to the exact (infinite-shot) objective evaluated locally.
VqeReport cmd_vqe(const RunConfig &config);

std::string vqe_json(const VqeReport &report);

} // namespace qoffload::apps
