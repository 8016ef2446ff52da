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

#include "qoffload/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qoffload::sim {

namespace {

using cd = std::complex<double>;

constexpr double kInvSqrt2 = 0.70710678118654752440;

struct Mat2 {
    cd a, b, c, d; // [[a,b],[c,d]]
};

Mat2 gate_matrix_1q(const qasm::GateOp &op) {
    using K = qasm::GateKind;
    const cd i{0.0, 1.0};
    switch (op.kind) {
    case K::H:
        return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
    case K::X:
        return {0, 1, 1, 0};
    case K::Y:
        return {0, -i, i, 0};
    case K::Z:
        return {1, 0, 0, -1};
    case K::S:
        return {1, 0, 0, i};
    case K::Sdg:
        return {1, 0, 0, -i};
    case K::T:
        return {1, 0, 0, std::polar(1.0, M_PI / 4)};
    case K::Tdg:
        return {1, 0, 0, std::polar(1.0, -M_PI / 4)};
    case K::Sx:
        return {0.5 * cd(1, 1), 0.5 * cd(1, -1), 0.5 * cd(1, -1), 0.5 * cd(1, 1)};
    case K::Rx: {
        double t = op.params[0] / 2;
        return {std::cos(t), -i * std::sin(t), -i * std::sin(t), std::cos(t)};
    }
    case K::Ry: {
        double t = op.params[0] / 2;
        return {std::cos(t), -std::sin(t), std::sin(t), std::cos(t)};
    }
    case K::Rz: {
        double t = op.params[0] / 2;
        return {std::polar(1.0, -t), 0, 0, std::polar(1.0, t)};
    }
    case K::U1:
        return {1, 0, 0, std::polar(1.0, op.params[0])};
    case K::U2: {
        double phi = op.params[0], lam = op.params[1];
        return {kInvSqrt2, -kInvSqrt2 * std::polar(1.0, lam),
                kInvSqrt2 * std::polar(1.0, phi), kInvSqrt2 * std::polar(1.0, phi + lam)};
    }
    case K::U3: {
        double th = op.params[0] / 2, phi = op.params[1], lam = op.params[2];
        return {std::cos(th), -std::polar(1.0, lam) * std::sin(th),
                std::polar(1.0, phi) * std::sin(th), std::polar(1.0, phi + lam) * std::cos(th)};
    }
    default:
        throw SimError(std::string("not a single-qubit gate: ") + qasm::gate_name(op.kind));
    }
}

void apply_1q(StateVector &s, int q, const Mat2 &m) {
    const std::size_t bit = std::size_t(1) << q;
    const std::size_t dim = s.amps.size();
    for (std::size_t base = 0; base < dim; base += 2 * bit) {
        for (std::size_t off = 0; off < bit; ++off) {
            std::size_t i0 = base + off;
            std::size_t i1 = i0 | bit;
            cd a0 = s.amps[i0], a1 = s.amps[i1];
            s.amps[i0] = m.a * a0 + m.b * a1;
            s.amps[i1] = m.c * a0 + m.d * a1;
        }
    }
}

double uniform01(std::mt19937_64 &rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

bool is_terminal_measurement(const qasm::Circuit &c, bool *has_measure) {
    bool seen = false;
    bool terminal = true;
    for (const auto &op : c.ops) {
        if (op.kind == qasm::GateKind::Measure)
            seen = true;
        else if (op.kind != qasm::GateKind::Barrier && seen)
            terminal = false;
    }
    if (has_measure)
        *has_measure = seen;
    return terminal;
}

void check_cap(const qasm::Circuit &c, const SimConfig &cfg) {
    if (c.n_qubits > cfg.max_qubits)
        throw QubitCapExceeded("circuit uses " + std::to_string(c.n_qubits) +
                               " qubits, exceeding the qubit cap of " +
                               std::to_string(cfg.max_qubits));
}

std::string key_for_basis(std::size_t basis, const qasm::Circuit &c) {
    std::string key(c.n_clbits, '0');
    for (const auto &op : c.ops) {
        if (op.kind != qasm::GateKind::Measure)
            continue;
        bool bit = (basis >> op.qubits[0]) & 1;
        key[c.n_clbits - 1 - op.clbit] = bit ? '1' : '0';
    }
    return key;
}

} // namespace

StateVector StateVector::zero(int n_qubits) {
    StateVector s;
    s.n_qubits = n_qubits;
    s.amps.assign(std::size_t(1) << n_qubits, cd(0, 0));
    s.amps[0] = 1;
    return s;
}

double StateVector::norm_sq() const {
    double n = 0;
    for (const auto &a : amps)
        n += std::norm(a);
    return n;
}

void apply_gate(StateVector &s, const qasm::GateOp &op) {
    using K = qasm::GateKind;
    const std::size_t dim = s.amps.size();
    switch (op.kind) {
    case K::Barrier:
        return;
    case K::Measure:
        throw MeasurementInOraclePath("measurement is not a unitary gate");
    case K::Cx: {
        std::size_t c = std::size_t(1) << op.qubits[0];
        std::size_t t = std::size_t(1) << op.qubits[1];
        for (std::size_t i = 0; i < dim; ++i)
            if ((i & c) && !(i & t))
                std::swap(s.amps[i], s.amps[i | t]);
        return;
    }
    case K::Cz: {
        std::size_t c = std::size_t(1) << op.qubits[0];
        std::size_t t = std::size_t(1) << op.qubits[1];
        for (std::size_t i = 0; i < dim; ++i)
            if ((i & c) && (i & t))
                s.amps[i] = -s.amps[i];
        return;
    }
    case K::Swap: {
        std::size_t a = std::size_t(1) << op.qubits[0];
        std::size_t b = std::size_t(1) << op.qubits[1];
        for (std::size_t i = 0; i < dim; ++i)
            if ((i & a) && !(i & b))
                std::swap(s.amps[i], s.amps[(i ^ a) | b]);
        return;
    }
    case K::Ccx: {
        std::size_t c0 = std::size_t(1) << op.qubits[0];
        std::size_t c1 = std::size_t(1) << op.qubits[1];
        std::size_t t = std::size_t(1) << op.qubits[2];
        for (std::size_t i = 0; i < dim; ++i)
            if ((i & c0) && (i & c1) && !(i & t))
                std::swap(s.amps[i], s.amps[i | t]);
        return;
    }
    default:
        apply_1q(s, op.qubits[0], gate_matrix_1q(op));
        return;
    }
}

StateVector run_statevector(const qasm::Circuit &circuit, const SimConfig &config) {
    check_cap(circuit, config);
    for (const auto &op : circuit.ops)
        if (op.kind == qasm::GateKind::Measure)
            throw MeasurementInOraclePath("run_statevector requires a measurement-free circuit");
    StateVector s = StateVector::zero(circuit.n_qubits);
    for (const auto &op : circuit.ops)
        apply_gate(s, op);
    return s;
}

std::map<std::string, double> exact_probabilities(const qasm::Circuit &circuit,
                                                  const SimConfig &config) {
    check_cap(circuit, config);
    bool has_measure = false;
    if (!is_terminal_measurement(circuit, &has_measure))
        throw SimError("exact_probabilities requires terminal measurements only");
    StateVector s = StateVector::zero(circuit.n_qubits);
    for (const auto &op : circuit.ops)
        if (op.kind != qasm::GateKind::Measure)
            apply_gate(s, op);
    std::map<std::string, double> probs;
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
        double p = std::norm(s.amps[i]);
        if (p > 0)
            probs[key_for_basis(i, circuit)] += p;
    }
    return probs;
}

namespace {

Counts sample_terminal(const qasm::Circuit &circuit, std::uint64_t shots,
                       std::mt19937_64 &rng, const SimConfig &config) {
    auto probs = exact_probabilities(circuit, config);
    std::vector<std::pair<std::string, double>> cum;
    cum.reserve(probs.size());
    double acc = 0;
    for (const auto &[key, p] : probs) {
        acc += p;
        cum.emplace_back(key, acc);
    }
    Counts counts;
    for (std::uint64_t k = 0; k < shots; ++k) {
        double u = uniform01(rng) * acc;
        auto it = std::lower_bound(cum.begin(), cum.end(), u,
                                   [](const auto &e, double v) { return e.second < v; });
        if (it == cum.end())
            --it;
        ++counts[it->first];
    }
    return counts;
}

Counts sample_trajectories(const qasm::Circuit &circuit, std::uint64_t shots,
                           std::mt19937_64 &rng) {
    Counts counts;
    for (std::uint64_t k = 0; k < shots; ++k) {
        StateVector s = StateVector::zero(circuit.n_qubits);
        std::string key(circuit.n_clbits, '0');
        for (const auto &op : circuit.ops) {
            if (op.kind != qasm::GateKind::Measure) {
                apply_gate(s, op);
                continue;
            }
            std::size_t bit = std::size_t(1) << op.qubits[0];
            double p1 = 0;
            for (std::size_t i = 0; i < s.amps.size(); ++i)
                if (i & bit)
                    p1 += std::norm(s.amps[i]);
            bool one = uniform01(rng) < p1;
            double norm = std::sqrt(one ? p1 : 1 - p1);
            for (std::size_t i = 0; i < s.amps.size(); ++i) {
                if (((i & bit) != 0) == one)
                    s.amps[i] /= norm;
                else
                    s.amps[i] = 0;
            }
            key[circuit.n_clbits - 1 - op.clbit] = one ? '1' : '0';
        }
        ++counts[key];
    }
    return counts;
}

} // namespace

Counts sample_counts(const qasm::Circuit &circuit, std::uint64_t shots, std::uint64_t seed,
                     const SimConfig &config) {
    check_cap(circuit, config);
    if (shots < 1)
        throw SimError("shots must be at least 1");
    bool has_measure = false;
    bool terminal = is_terminal_measurement(circuit, &has_measure);
    if (!has_measure)
        throw NoMeasurements("circuit has no measurement operations");
    std::mt19937_64 rng(seed);
    return terminal ? sample_terminal(circuit, shots, rng, config)
                    : sample_trajectories(circuit, shots, rng);
}

} // namespace qoffload::sim
