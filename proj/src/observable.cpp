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

#include "qoffload/observable.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

namespace qoffload::observable {

PauliSum parse_pauli_sum(std::string_view text) {
    PauliSum h;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string coeff_text, paulis;
        if (!(ls >> coeff_text))
            continue;
        if (!(ls >> paulis))
            throw ObservableError("line " + std::to_string(lineno) +
                                  ": expected `<coeff> <pauli-string>`");
        std::size_t used = 0;
        double coeff;
        try {
            coeff = std::stod(coeff_text, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != coeff_text.size() || !std::isfinite(coeff))
            throw ObservableError("line " + std::to_string(lineno) + ": bad coefficient '" +
                                  coeff_text + "'");
        for (char c : paulis)
            if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
                throw ObservableError("line " + std::to_string(lineno) +
                                      ": bad Pauli character '" + std::string(1, c) + "'");
        if (h.terms.empty()) {
            h.n_qubits = static_cast<int>(paulis.size());
        } else if (static_cast<int>(paulis.size()) != h.n_qubits) {
            throw ObservableError("line " + std::to_string(lineno) +
                                  ": Pauli string length mismatch");
        }
        h.terms.push_back({coeff, paulis});
    }
    return h;
}

PauliSum load_pauli_sum_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ObservableError("cannot open Hamiltonian file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_pauli_sum(ss.str());
}

namespace {

bool compatible(const std::string &basis, const std::string &paulis) {
    for (std::size_t k = 0; k < paulis.size(); ++k)
        if (paulis[k] != 'I' && basis[k] != 'I' && basis[k] != paulis[k])
            return false;
    return true;
}

void merge_into(std::string &basis, const std::string &paulis) {
    for (std::size_t k = 0; k < paulis.size(); ++k)
        if (paulis[k] != 'I')
            basis[k] = paulis[k];
}

} // namespace

std::vector<MeasurementGroup> group_terms(const PauliSum &h) {
    std::vector<MeasurementGroup> groups;
    for (std::size_t i = 0; i < h.terms.size(); ++i) {
        const auto &paulis = h.terms[i].paulis;
        bool placed = false;
        for (auto &g : groups) {
            if (compatible(g.basis, paulis)) {
                merge_into(g.basis, paulis);
                g.members.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed)
            groups.push_back({[&] {
                                  std::string b(h.n_qubits, 'I');
                                  merge_into(b, paulis);
                                  return b;
                              }(),
                              {i}});
    }
    return groups;
}

std::string basis_extension(const MeasurementGroup &group, int n_qubits) {
    std::string out;
    for (int q = 0; q < n_qubits; ++q) {
        char b = q < static_cast<int>(group.basis.size()) ? group.basis[q] : 'I';
        std::string qs = std::to_string(q);
        if (b == 'X') {
            out += "h q[" + qs + "];\n";
        } else if (b == 'Y') {
            out += "sdg q[" + qs + "];\nh q[" + qs + "];\n";
        }
    }
    for (int q = 0; q < n_qubits; ++q)
        out += "measure q[" + std::to_string(q) + "] -> c[" + std::to_string(q) + "];\n";
    return out;
}

double estimate_term(const sim::Counts &counts, const PauliTerm &term, std::uint64_t shots) {
    double acc = 0;
    for (const auto &[key, count] : counts) {
        if (key.size() < term.paulis.size())
            throw ObservableError("counts key shorter than Pauli term support");
        int parity = 0;
        for (std::size_t q = 0; q < term.paulis.size(); ++q)
            if (term.paulis[q] != 'I' && key[key.size() - 1 - q] == '1')
                parity ^= 1;
        acc += (parity ? -1.0 : 1.0) * static_cast<double>(count);
    }
    return acc / static_cast<double>(shots);
}

double estimate_energy(const PauliSum &h, const std::vector<MeasurementGroup> &groups,
                       const std::vector<sim::Counts> &counts_per_group) {
    if (groups.size() != counts_per_group.size())
        throw ObservableError("need exactly one Counts per measurement group");
    double energy = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        std::uint64_t shots = 0;
        for (const auto &[key, count] : counts_per_group[g])
            shots += count;
        if (shots == 0)
            throw ObservableError("empty counts for measurement group " + std::to_string(g));
        for (std::size_t k : groups[g].members)
            energy += h.terms[k].coeff * estimate_term(counts_per_group[g], h.terms[k], shots);
    }
    return energy;
}

double exact_energy(const sim::StateVector &state, const PauliSum &h) {
    using cd = std::complex<double>;
    if (state.n_qubits != h.n_qubits)
        throw ObservableError("state and Hamiltonian qubit counts differ");
    cd total = 0;
    for (const auto &term : h.terms) {
        // Apply the Pauli string to |psi> columnwise: X flips a bit, Y flips
        // with +-i, Z flips the sign.
        cd acc = 0;
        std::size_t flip = 0;
        for (int q = 0; q < h.n_qubits; ++q)
            if (term.paulis[q] == 'X' || term.paulis[q] == 'Y')
                flip |= std::size_t(1) << q;
        for (std::size_t idx = 0; idx < state.amps.size(); ++idx) {
            cd amp = state.amps[idx];
            if (amp == cd(0, 0))
                continue;
            cd factor = 1;
            for (int q = 0; q < h.n_qubits; ++q) {
                bool bit = (idx >> q) & 1;
                switch (term.paulis[q]) {
                case 'Y':
                    factor *= bit ? cd(0, -1) : cd(0, 1);
                    break;
                case 'Z':
                    if (bit)
                        factor = -factor;
                    break;
                default:
                    break;
                }
            }
            acc += std::conj(state.amps[idx ^ flip]) * factor * amp;
        }
        total += term.coeff * acc;
    }
    if (std::abs(total.imag()) >= 1e-10)
        throw ObservableError("expectation value has a non-negligible imaginary part");
    return total.real();
}

double exact_energy(const qasm::Circuit &circuit, const PauliSum &h) {
    return exact_energy(sim::run_statevector(circuit), h);
}

} // namespace qoffload::observable
