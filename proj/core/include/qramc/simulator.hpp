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
#include <map>
#include <stdexcept>
#include <vector>

#include "qramc/bits.hpp"
#include "qramc/circuit.hpp"
#include "qramc/sparse_state.hpp"

namespace qramc {

using Matrix2 = std::array<Amplitude, 4>;  // row-major

/// The 2x2 unitary for a single-qubit gate kind.
Matrix2 gate_matrix(const GateSpec& gate);

/// Applies a single-qubit unitary to `target`, conditioned on every qubit in
/// `controls` being 1.
void apply_1q(SparseState& state, const Matrix2& u, std::size_t target,
              const std::vector<std::size_t>& controls = {});

void apply_gate(SparseState& state, const GateSpec& gate);

/// RAG with the fixed QRAM wiring of `circuit`.
void apply_rag(SparseState& state, const QramCircuit& circuit);

/// READ oracle against input bits `input` (length n).
void apply_read(SparseState& state, const Read& read, const BitString& input);

/// Applies one instruction.
void apply_instruction(SparseState& state, const Instruction& instr,
                       const QramCircuit& circuit, const BitString& input);

/// Memory Hamming weight bookkeeping for a run.
struct SparsityReport {
    /// Entry t is the maximum memory weight over the support after t
    /// instructions; entry 0 is the initial state.
    std::vector<std::size_t> max_weight_per_step;
    std::size_t max_weight = 0;
    bool exceeded = false;
    /// First step whose weight exceeded the declared sparsity, if any.
    long first_violation = -1;
};

class SparsityViolation : public std::runtime_error {
  public:
    SparsityViolation(std::size_t step, std::size_t weight, std::size_t declared);
    std::size_t step() const { return step_; }
    std::size_t weight() const { return weight_; }

  private:
    std::size_t step_;
    std::size_t weight_;
};

enum class SparsityMode {
    kOff,
    kMonitor,
    /// Monitor and throw SparsityViolation on the first excess.
    kEnforce,
};

struct RunResult {
    SparseState state;
    SparsityReport report;
};

/// Runs `circuit` from |0...0> on input `input`.
RunResult run(const QramCircuit& circuit, const BitString& input,
              SparsityMode mode = SparsityMode::kMonitor);

/// Maximum Hamming weight of the bits [offset, offset+width) over the support.
std::size_t max_weight(const SparseState& state, std::size_t offset, std::size_t width);

using OutcomeDistribution = std::map<BitString, double>;

/// Exact marginal distribution over `positions` (in the listed order).
OutcomeDistribution measure_distribution(const SparseState& state,
                                         const std::vector<std::size_t>& positions);

/// Total-variation distance; missing keys count as probability 0.
double total_variation(const OutcomeDistribution& a, const OutcomeDistribution& b);

}  // namespace qramc
