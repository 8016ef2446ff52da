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
 * OpenQASM 2.0 parsing, serialization, `$[k]` parameter substitution and
 * extension handling.
 */

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qoffload::qasm {

struct QasmError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed source. Carries 1-based line/column of the offending token.
struct SyntaxError : QasmError {
    SyntaxError(const std::string &msg, std::size_t line, std::size_t col);
    std::size_t line;
    std::size_t col;
};

/// Constructs outside the supported dialect (if, reset, opaque, gate defs).
struct UnsupportedFeature : SyntaxError {
    using SyntaxError::SyntaxError;
};

/// `$[k]` referenced with k beyond the supplied binding.
struct PlaceholderOutOfRange : QasmError {
    using QasmError::QasmError;
};

enum class GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Sx,
    Rx,
    Ry,
    Rz,
    U1,
    U2,
    U3,
    Cx,
    Cz,
    Swap,
    Ccx,
    Barrier,
    Measure,
};

/// One circuit operation. `clbit` is used by Measure only.
struct GateOp {
    GateKind kind;
    std::vector<double> params;
    std::vector<int> qubits;
    int clbit = -1;

    bool operator==(const GateOp &) const = default;
};

struct Circuit {
    int n_qubits = 0;
    int n_clbits = 0;
    std::vector<GateOp> ops;
    std::string source_name;
};

/// Number of qubit operands for a gate kind, or -1 for variadic (barrier).
int gate_arity(GateKind kind);

/// Number of angle parameters for a gate kind.
int gate_param_count(GateKind kind);

const char *gate_name(GateKind kind);

std::optional<GateKind> gate_from_name(std::string_view name);

/// Decimal rendering of an angle: at least 15 significant digits and
/// guaranteed to parse back to the same double.
std::string format_angle(double v);

/// Replaces every `$[k]` token in `source` by the decimal rendering of
/// `values[k]`. No other bytes change. Throws PlaceholderOutOfRange for an
/// unbound index. If `highest_used` is given, it receives the largest index
/// referenced (-1 when none); callers may warn about unused bindings.
std::string substitute_params(std::string_view source,
                              const std::vector<double> &values,
                              int *highest_used = nullptr);

/// Appends `extension` to `source` separated by a newline. An empty source
/// yields a canonical header (`OPENQASM 2.0`, qelib1 include, one qreg/creg
/// of `default_registers` bits) followed by the extension, since an
/// extension alone has no declarations.
std::string append_extension(std::string_view source, std::string_view extension,
                             int default_registers = 1);

/// Parses OpenQASM 2.0 source into a Circuit. The source must already be
/// fully substituted (a surviving `$[k]` is a syntax error). Accepts the
/// `OPENQASM 2.0;` header and `include "qelib1.inc";`, multiple quantum and
/// classical registers (flattened in declaration order), whole-register
/// broadcast for single-qubit gates and measure, and `//` comments.
Circuit parse(std::string_view source, std::string_view name = "");

/// Emits OpenQASM 2.0 text that re-parses to an op-for-op identical circuit.
std::string serialize(const Circuit &circuit);

} // namespace qoffload::qasm
