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
 * Pauli-sum observables: parsing, qubit-wise commuting measurement groups,
 * basis-change QASM extensions, and expectation estimation from counts.
 *
 * A Pauli string is indexed by qubit: character k acts on qubit k. Counts
 * keys use the opposite convention (classical bit 0 rightmost).
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qoffload/qasm.hpp"
#include "qoffload/sim.hpp"

namespace qoffload::observable {

struct ObservableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PauliTerm {
    double coeff;
    std::string paulis; // over {I,X,Y,Z}, length n_qubits, index k = qubit k
};

struct PauliSum {
    int n_qubits = 0;
    std::vector<PauliTerm> terms;
};

struct MeasurementGroup {
    std::string basis;               // per-qubit letter, I where unconstrained
    std::vector<std::size_t> members; // indices into PauliSum::terms
};

/// Parses lines of `<coeff> <pauli-string>`; `#` starts a comment.
PauliSum parse_pauli_sum(std::string_view text);

PauliSum load_pauli_sum_file(const std::string &path);

/// Greedy qubit-wise-commuting grouping: each term joins the first group
/// whose basis is compatible (identity slots merge), else opens a new group.
std::vector<MeasurementGroup> group_terms(const PauliSum &h);

/// QASM snippet rotating into the group's basis (h for X, sdg+h for Y)
/// followed by measure statements for all qubits.
std::string basis_extension(const MeasurementGroup &group, int n_qubits);

/// <P> from counts of a compatible-basis run: the parity sum
/// sum_b (counts[b]/shots) * (-1)^popcount(b on the term's support).
double estimate_term(const sim::Counts &counts, const PauliTerm &term, std::uint64_t shots);

/// Energy estimate sum_k coeff_k * <P_k>, using one Counts per group.
double estimate_energy(const PauliSum &h, const std::vector<MeasurementGroup> &groups,
                       const std::vector<sim::Counts> &counts_per_group);

/// Infinite-shot oracle: Re <psi|H|psi> for the measurement-free circuit.
double exact_energy(const qasm::Circuit &circuit, const PauliSum &h);

/// <psi|H|psi> on an existing state (test/oracle entry point).
double exact_energy(const sim::StateVector &state, const PauliSum &h);

} // namespace qoffload::observable
