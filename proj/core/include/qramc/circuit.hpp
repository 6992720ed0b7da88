// Copyright 2026 The qramc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qramc {

enum class GateKind { H, X, Y, Z, S, Sdg, T, Tdg, U3, CNOT };

std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_from_name(std::string_view name);
std::size_t gate_arity(GateKind kind);

/// A basic gate applied to work qubits.
///
/// U3 carries three angles (theta, phi, lambda) in radians and denotes the
/// Z-Y-Z Euler form
///
///     [[cos(theta/2),            -e^{i lambda} sin(theta/2)],
///      [e^{i phi} sin(theta/2),  e^{i(phi+lambda)} cos(theta/2)]]
///
/// which equals Rz(phi) Ry(theta) Rz(lambda) up to a global phase. For
/// CNOT, targets = {control, target}.
struct GateSpec {
    GateKind kind = GateKind::H;
    std::vector<int> targets;
    std::array<double, 3> angles{0.0, 0.0, 0.0};

    friend bool operator==(const GateSpec&, const GateSpec&) = default;
};

struct ApplyGate {
    GateSpec gate;
    friend bool operator==(const ApplyGate&, const ApplyGate&) = default;
};

/// Query oracle: XORs input bit x_{a} into `target`, with a the big-endian
/// value held by `address` (first listed qubit is the most significant).
struct Read {
    std::vector<int> address;
    int target = 0;
    friend bool operator==(const Read&, const Read&) = default;
};

/// Random-access gate with the fixed QRAM wiring: address = work qubits
/// 0..log2(M)-1, swap bit = work qubit log2(M), addressed qubits = memory.
struct Rag {
    friend bool operator==(const Rag&, const Rag&) = default;
};

using Instruction = std::variant<ApplyGate, Read, Rag>;

/// A QRAM circuit: W work qubits (positions 0..W-1) followed by M memory
/// qubits (positions W..W+M-1), with declared sparsity m.
struct QramCircuit {
    std::size_t n = 1;
    std::size_t W = 1;
    std::size_t M = 1;
    std::size_t m = 1;
    std::vector<Instruction> instructions;

    std::size_t T() const { return instructions.size(); }
    std::size_t address_bits() const;
    std::size_t swap_qubit() const { return address_bits(); }
    std::size_t total_qubits() const { return W + M; }

    friend bool operator==(const QramCircuit&, const QramCircuit&) = default;
};

struct Violation {
    /// Index into `instructions`, or -1 for a header parameter.
    long instruction = -1;
    std::string rule;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Checks every QRAM restriction; an empty result means the circuit is legal.
std::vector<Violation> validate_qram(const QramCircuit& circuit);

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

  private:
    std::vector<Violation> violations_;
};

/// Parses the line-based circuit format and validates the result.
/// Throws ParseError (with 1-based line number) or ValidationError.
QramCircuit parse_circuit(std::string_view text);

/// Canonical text form: header, then one instruction per line, no comments.
std::string serialize_circuit(const QramCircuit& circuit);

}  // namespace qramc
