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

#include "qoffload/transpile.hpp"

#include <cmath>
#include <sstream>

#include "qoffload/sim.hpp"

namespace qoffload::transpile {

namespace {

using cd = std::complex<double>;
using qasm::GateKind;
using qasm::GateOp;

constexpr double kAngleEps = 1e-12;

double normalize_angle(double a) {
    a = std::fmod(a, 2 * M_PI);
    if (a > M_PI)
        a -= 2 * M_PI;
    if (a <= -M_PI)
        a += 2 * M_PI;
    return a;
}

bool negligible(double angle) { return std::abs(normalize_angle(angle)) < kAngleEps; }

/// 2x2 unitary of a single-qubit gate, via the simulator's gate application.
void matrix_1q(const GateOp &gate, cd out[2][2]) {
    GateOp local = gate;
    local.qubits = {0};
    for (int col = 0; col < 2; ++col) {
        sim::StateVector s = sim::StateVector::zero(1);
        s.amps[0] = col == 0 ? 1 : 0;
        s.amps[1] = col == 0 ? 0 : 1;
        sim::apply_gate(s, local);
        out[0][col] = s.amps[0];
        out[1][col] = s.amps[1];
    }
}

void push_rz(std::vector<GateOp> &ops, double angle, int qubit) {
    if (!negligible(angle))
        ops.push_back({GateKind::Rz, {normalize_angle(angle)}, {qubit}, -1});
}

} // namespace

GateSet GateSet::native() { return GateSet{{GateKind::Rz, GateKind::Sx, GateKind::Cx}}; }

GateSet GateSet::from_names(const std::string &csv) {
    GateSet gs;
    std::stringstream ss(csv);
    std::string name;
    while (std::getline(ss, name, ',')) {
        auto kind = qasm::gate_from_name(name);
        if (!kind)
            throw TranspileError("unknown gate name in gate set: '" + name + "'");
        gs.kinds.insert(*kind);
    }
    if (gs.kinds.empty())
        throw TranspileError("empty gate set");
    return gs;
}

std::vector<qasm::GateOp> decompose_1q(const qasm::GateOp &gate) {
    if (gate.qubits.size() != 1 || gate.kind == GateKind::Measure ||
        gate.kind == GateKind::Barrier)
        throw UnsupportedGate(std::string("not a single-qubit gate: ") +
                              qasm::gate_name(gate.kind));
    int q = gate.qubits[0];
    if (gate.kind == GateKind::Rz) {
        std::vector<GateOp> out;
        push_rz(out, gate.params[0], q);
        return out;
    }

    cd u[2][2];
    matrix_1q(gate, u);
    // Normalize to SU(2): U' = U / sqrt(det U).
    cd det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    cd root = std::sqrt(det);
    cd alpha = u[0][0] / root;
    cd beta = u[1][0] / root;

    // ZYZ angles of U' = Rz(phi) Ry(theta) Rz(lam).
    double theta = 2 * std::atan2(std::abs(beta), std::abs(alpha));
    double sum = std::abs(alpha) > 1e-12 ? -2 * std::arg(alpha) : 0.0;
    double diff = std::abs(beta) > 1e-12 ? 2 * std::arg(beta) : 0.0;
    double phi = (sum + diff) / 2;
    double lam = (sum - diff) / 2;

    std::vector<GateOp> out;
    if (negligible(theta)) {
        push_rz(out, sum, q);
        return out;
    }
    // Rz(phi) Ry(theta) Rz(lam) = Rz(phi+pi) SX Rz(theta+pi) SX Rz(lam), up to phase.
    push_rz(out, lam, q);
    out.push_back({GateKind::Sx, {}, {q}, -1});
    push_rz(out, theta + M_PI, q);
    out.push_back({GateKind::Sx, {}, {q}, -1});
    push_rz(out, phi + M_PI, q);
    return out;
}

namespace {

void lower_1q(const GateOp &op, const GateSet &gs, std::vector<GateOp> &out) {
    if (gs.contains(op.kind)) {
        out.push_back(op);
        return;
    }
    if (!gs.contains(GateKind::Rz) || !gs.contains(GateKind::Sx))
        throw UnsupportedGate(std::string("gate set cannot express single-qubit gate '") +
                              qasm::gate_name(op.kind) + "' (needs rz and sx)");
    for (auto &g : decompose_1q(op))
        out.push_back(g);
}

void lower_op(const GateOp &op, const GateSet &gs, std::vector<GateOp> &out) {
    using K = GateKind;
    switch (op.kind) {
    case K::Measure:
    case K::Barrier:
        out.push_back(op);
        return;
    case K::Cx:
        if (!gs.contains(K::Cx))
            throw IrreducibleGate("gate set has no cx entangler");
        out.push_back(op);
        return;
    case K::Cz: {
        if (gs.contains(K::Cz)) {
            out.push_back(op);
            return;
        }
        if (!gs.contains(K::Cx))
            throw IrreducibleGate("gate set has no entangler reachable from cz");
        int c = op.qubits[0], t = op.qubits[1];
        lower_1q({K::H, {}, {t}, -1}, gs, out);
        out.push_back({K::Cx, {}, {c, t}, -1});
        lower_1q({K::H, {}, {t}, -1}, gs, out);
        return;
    }
    case K::Swap: {
        if (gs.contains(K::Swap)) {
            out.push_back(op);
            return;
        }
        if (!gs.contains(K::Cx))
            throw IrreducibleGate("gate set has no entangler reachable from swap");
        int a = op.qubits[0], b = op.qubits[1];
        out.push_back({K::Cx, {}, {a, b}, -1});
        out.push_back({K::Cx, {}, {b, a}, -1});
        out.push_back({K::Cx, {}, {a, b}, -1});
        return;
    }
    case K::Ccx: {
        if (gs.contains(K::Ccx)) {
            out.push_back(op);
            return;
        }
        if (!gs.contains(K::Cx))
            throw IrreducibleGate("gate set has no entangler reachable from ccx");
        // Standard 6-cx Toffoli decomposition (qelib1).
        int a = op.qubits[0], b = op.qubits[1], c = op.qubits[2];
        lower_1q({K::H, {}, {c}, -1}, gs, out);
        out.push_back({K::Cx, {}, {b, c}, -1});
        lower_1q({K::Tdg, {}, {c}, -1}, gs, out);
        out.push_back({K::Cx, {}, {a, c}, -1});
        lower_1q({K::T, {}, {c}, -1}, gs, out);
        out.push_back({K::Cx, {}, {b, c}, -1});
        lower_1q({K::Tdg, {}, {c}, -1}, gs, out);
        out.push_back({K::Cx, {}, {a, c}, -1});
        lower_1q({K::T, {}, {b}, -1}, gs, out);
        lower_1q({K::T, {}, {c}, -1}, gs, out);
        lower_1q({K::H, {}, {c}, -1}, gs, out);
        out.push_back({K::Cx, {}, {a, b}, -1});
        lower_1q({K::T, {}, {a}, -1}, gs, out);
        lower_1q({K::Tdg, {}, {b}, -1}, gs, out);
        out.push_back({K::Cx, {}, {a, b}, -1});
        return;
    }
    default:
        lower_1q(op, gs, out);
        return;
    }
}

/// Merges an rz into an immediately preceding rz on the same qubit, where
/// "preceding" means no other op touched that qubit in between.
std::vector<GateOp> merge_rz(const std::vector<GateOp> &ops, int n_qubits) {
    std::vector<GateOp> out;
    std::vector<int> last(n_qubits, -1); // index into out of last op per qubit
    auto touch = [&](const GateOp &op, int idx) {
        for (int q : op.qubits)
            last[q] = idx;
        };
    for (const auto &op : ops) {
        if (op.kind == GateKind::Rz) {
            int q = op.qubits[0];
            int prev = last[q];
            if (prev >= 0 && out[prev].kind == GateKind::Rz && out[prev].qubits[0] == q) {
                out[prev].params[0] = normalize_angle(out[prev].params[0] + op.params[0]);
                continue;
            }
        }
        out.push_back(op);
        touch(op, static_cast<int>(out.size()) - 1);
    }
    // Drop rotations that merged to identity.
    std::vector<GateOp> cleaned;
    for (auto &op : out)
        if (!(op.kind == GateKind::Rz && negligible(op.params[0])))
            cleaned.push_back(std::move(op));
    return cleaned;
}

} // namespace

qasm::Circuit transpile(const qasm::Circuit &circuit, const GateSet &gateset) {
    qasm::Circuit out;
    out.n_qubits = circuit.n_qubits;
    out.n_clbits = circuit.n_clbits;
    out.source_name = circuit.source_name;
    for (const auto &op : circuit.ops)
        lower_op(op, gateset, out.ops);
    out.ops = merge_rz(out.ops, out.n_qubits);
    return out;
}

CMatrix unitary_of(const qasm::Circuit &circuit) {
    if (circuit.n_qubits > 10)
        throw TooManyQubits("unitary_of supports at most 10 qubits");
    for (const auto &op : circuit.ops)
        if (op.kind == GateKind::Measure)
            throw MeasurementPresent("unitary_of requires a measurement-free circuit");
    std::size_t dim = std::size_t(1) << circuit.n_qubits;
    CMatrix m(dim);
    for (std::size_t col = 0; col < dim; ++col) {
        sim::StateVector s;
        s.n_qubits = circuit.n_qubits;
        s.amps.assign(dim, cd(0, 0));
        s.amps[col] = 1;
        for (const auto &op : circuit.ops)
            sim::apply_gate(s, op);
        for (std::size_t row = 0; row < dim; ++row)
            m.at(row, col) = s.amps[row];
    }
    return m;
}

bool equivalent_up_to_phase(const CMatrix &a, const CMatrix &b, double tol) {
    if (a.dim != b.dim)
        throw DimensionMismatch("matrix dimensions differ");
    std::size_t imax = 0;
    double best = -1;
    for (std::size_t i = 0; i < b.data.size(); ++i) {
        double mag = std::abs(b.data[i]);
        if (mag > best) {
            best = mag;
            imax = i;
        }
    }
    if (best <= 0)
        return false;
    cd phase = a.data[imax] / b.data[imax];
    double mag = std::abs(phase);
    if (mag < 1e-12)
        return false;
    phase /= mag;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        if (std::abs(a.data[i] - phase * b.data[i]) >= tol)
            return false;
    return true;
}

} // namespace qoffload::transpile
