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
 * Circuit lowering to a native gate set via ZXZXZ Euler decomposition, plus
 * the dense-matrix equivalence oracle.
 */

#pragma once

#include <complex>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qoffload/qasm.hpp"

namespace qoffload::transpile {

struct TranspileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedGate : TranspileError {
    using TranspileError::TranspileError;
};
struct IrreducibleGate : TranspileError {
    using TranspileError::TranspileError;
};
struct TooManyQubits : TranspileError {
    using TranspileError::TranspileError;
};
struct MeasurementPresent : TranspileError {
    using TranspileError::TranspileError;
};
struct DimensionMismatch : TranspileError {
    using TranspileError::TranspileError;
};

struct GateSet {
    std::set<qasm::GateKind> kinds;

    /// Default hardware basis {rz, sx, cx}.
    static GateSet native();
    static GateSet from_names(const std::string &csv);
    bool contains(qasm::GateKind kind) const { return kinds.count(kind) > 0; }
};

/// Dense complex matrix, row-major, dim x dim.
struct CMatrix {
    std::size_t dim = 0;
    std::vector<std::complex<double>> data;

    explicit CMatrix(std::size_t d = 0) : dim(d), data(d * d) {}
    std::complex<double> &at(std::size_t r, std::size_t c) { return data[r * dim + c]; }
    const std::complex<double> &at(std::size_t r, std::size_t c) const {
        return data[r * dim + c];
    }
};

/// Rewrites one single-qubit gate as rz/sx ops (ZXZXZ form) with the same
/// unitary up to global phase. Near-zero rotations are elided, so the result
/// has between 0 and 5 ops.
std::vector<qasm::GateOp> decompose_1q(const qasm::GateOp &gate);

/// Lowers every op of `circuit` into `gateset`, preserving measures and
/// barriers. Adjacent rz gates on the same qubit are merged.
qasm::Circuit transpile(const qasm::Circuit &circuit, const GateSet &gateset = GateSet::native());

/// Full unitary of a measurement-free circuit (n_qubits <= 10).
CMatrix unitary_of(const qasm::Circuit &circuit);

/// True iff a == e^{i alpha} b elementwise within `tol`, with the phase fixed
/// on the largest-magnitude entry of b.
bool equivalent_up_to_phase(const CMatrix &a, const CMatrix &b, double tol);

} // namespace qoffload::transpile
