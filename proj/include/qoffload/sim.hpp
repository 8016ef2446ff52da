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
 * Statevector simulation and measurement sampling.
 *
 * Conventions: qubit 0 is the least-significant index bit of the amplitude
 * array; classical bit 0 is the rightmost character of a counts key. The
 * sampling RNG is mt19937_64, so counts are reproducible across platforms
 * for a fixed (circuit, shots, seed).
 */

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qoffload/qasm.hpp"

namespace qoffload::sim {

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct QubitCapExceeded : SimError {
    using SimError::SimError;
};
struct MeasurementInOraclePath : SimError {
    using SimError::SimError;
};
struct NoMeasurements : SimError {
    using SimError::SimError;
};

using Counts = std::map<std::string, std::uint64_t>;

struct StateVector {
    int n_qubits = 0;
    std::vector<std::complex<double>> amps;

    static StateVector zero(int n_qubits);
    double norm_sq() const;
};

struct SimConfig {
    int max_qubits = 24;
};

/// Applies one gate in place. Measure/barrier are rejected.
void apply_gate(StateVector &state, const qasm::GateOp &op);

/// Exact final state of a measurement-free circuit applied to |0...0>.
StateVector run_statevector(const qasm::Circuit &circuit, const SimConfig &config = {});

/// Samples measurement counts. Terminal-measurement circuits are sampled
/// from the exact final distribution in one pass; circuits with gates after
/// a measurement fall back to per-shot trajectories with Born-rule collapse.
Counts sample_counts(const qasm::Circuit &circuit, std::uint64_t shots, std::uint64_t seed,
                     const SimConfig &config = {});

/// Exact classical-outcome distribution for a terminal-measurement circuit.
std::map<std::string, double> exact_probabilities(const qasm::Circuit &circuit,
                                                  const SimConfig &config = {});

} // namespace qoffload::sim
