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

#include "qramc/simulator.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qramc {

namespace {

void check_position(const SparseState& state, std::size_t q) {
    if (q >= state.num_qubits()) {
        throw std::out_of_range("qubit " + std::to_string(q) + " out of range for " +
                                std::to_string(state.num_qubits()) + "-qubit state");
    }
}

}  // namespace

Matrix2 gate_matrix(const GateSpec& gate) {
    const double r = 1.0 / std::numbers::sqrt2;
    const Amplitude i{0.0, 1.0};
    switch (gate.kind) {
        case GateKind::H:
            return {r, r, r, -r};
        case GateKind::X:
            return {0.0, 1.0, 1.0, 0.0};
        case GateKind::Y:
            return {0.0, -i, i, 0.0};
        case GateKind::Z:
            return {1.0, 0.0, 0.0, -1.0};
        case GateKind::S:
            return {1.0, 0.0, 0.0, i};
        case GateKind::Sdg:
            return {1.0, 0.0, 0.0, -i};
        case GateKind::T:
            return {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4)};
        case GateKind::Tdg:
            return {1.0, 0.0, 0.0, std::polar(1.0, -std::numbers::pi / 4)};
        case GateKind::U3: {
            const double th = gate.angles[0];
            const double ph = gate.angles[1];
            const double la = gate.angles[2];
            const double c = std::cos(th / 2);
            const double s = std::sin(th / 2);
            return {c, -std::polar(s, la), std::polar(s, ph), std::polar(c, ph + la)};
        }
        case GateKind::CNOT:
            break;
    }
    throw std::invalid_argument("gate has no 2x2 matrix");
}

void apply_1q(SparseState& state, const Matrix2& u, std::size_t target,
              const std::vector<std::size_t>& controls) {
    check_position(state, target);
    for (const auto c : controls) {
        check_position(state, c);
    }
    state.transform([&](const BitString& key, Amplitude a, const SparseState::Emit& emit) {
        if (!controls_active(key, controls)) {
            emit(key, a);
            return;
        }
        const int b = key.get(target) ? 1 : 0;
        BitString out = key;
        for (int row = 0; row < 2; ++row) {
            const Amplitude coeff = u[static_cast<std::size_t>(row * 2 + b)];
            if (coeff != Amplitude{0.0, 0.0}) {
                out.set(target, row == 1);
                emit(out, coeff * a);
            }
        }
    });
}

void apply_gate(SparseState& state, const GateSpec& gate) {
    if (gate.targets.size() != gate_arity(gate.kind)) {
        throw std::invalid_argument("wrong number of targets for gate");
    }
    for (const auto t : gate.targets) {
        if (t < 0) {
            throw std::out_of_range("negative qubit index");
        }
        check_position(state, static_cast<std::size_t>(t));
    }
    if (gate.kind == GateKind::CNOT) {
        const auto c = static_cast<std::size_t>(gate.targets[0]);
        const auto t = static_cast<std::size_t>(gate.targets[1]);
        if (c == t) {
            throw std::invalid_argument("CNOT control equals target");
        }
        state.permute([c, t](BitString& key) {
            if (key.get(c)) {
                key.flip(t);
            }
        });
        return;
    }
    apply_1q(state, gate_matrix(gate), static_cast<std::size_t>(gate.targets[0]));
}

void apply_rag(SparseState& state, const QramCircuit& circuit) {
    const std::size_t ell = circuit.address_bits();
    const std::size_t swap = circuit.swap_qubit();
    const std::size_t W = circuit.W;
    const std::size_t M = circuit.M;
    if (state.num_qubits() != circuit.total_qubits()) {
        throw std::invalid_argument("state size does not match circuit");
    }
    if (swap >= W) {
        throw std::invalid_argument("work register too small for RAG wiring");
    }
    state.permute([=](BitString& key) {
        const std::uint64_t i = key.get_uint(0, ell);
        if (i >= M) {
            throw std::out_of_range("RAG address " + std::to_string(i) + " >= M");
        }
        const std::size_t mem = W + static_cast<std::size_t>(i);
        const bool b = key.get(swap);
        key.set(swap, key.get(mem));
        key.set(mem, b);
    });
}

void apply_read(SparseState& state, const Read& read, const BitString& input) {
    for (const auto q : read.address) {
        check_position(state, static_cast<std::size_t>(q));
    }
    check_position(state, static_cast<std::size_t>(read.target));
    const auto target = static_cast<std::size_t>(read.target);
    state.permute([&](BitString& key) {
        std::uint64_t y = 0;
        for (const auto q : read.address) {
            y = (y << 1) | (key.get(static_cast<std::size_t>(q)) ? 1U : 0U);
        }
        if (y >= input.size()) {
            throw std::out_of_range("READ address " + std::to_string(y) +
                                    " outside input of length " + std::to_string(input.size()));
        }
        if (input.get(static_cast<std::size_t>(y))) {
            key.flip(target);
        }
    });
}

void apply_instruction(SparseState& state, const Instruction& instr,
                       const QramCircuit& circuit, const BitString& input) {
    if (const auto* g = std::get_if<ApplyGate>(&instr)) {
        apply_gate(state, g->gate);
    } else if (const auto* r = std::get_if<Read>(&instr)) {
        apply_read(state, *r, input);
    } else {
        apply_rag(state, circuit);
    }
}

SparsityViolation::SparsityViolation(std::size_t step, std::size_t weight, std::size_t declared)
    : std::runtime_error("memory weight " + std::to_string(weight) + " exceeds declared m=" +
                         std::to_string(declared) + " after instruction " +
                         std::to_string(step)),
      step_(step),
      weight_(weight) {}

std::size_t max_weight(const SparseState& state, std::size_t offset, std::size_t width) {
    std::size_t best = 0;
    for (const auto& [key, a] : state.entries()) {
        best = std::max(best, key.popcount(offset, width));
    }
    return best;
}

RunResult run(const QramCircuit& circuit, const BitString& input, SparsityMode mode) {
    if (input.size() != circuit.n) {
        throw std::invalid_argument("input has " + std::to_string(input.size()) +
                                    " bits, circuit expects n=" + std::to_string(circuit.n));
    }
    RunResult result{SparseState(circuit.total_qubits()), {}};
    auto record = [&](std::size_t step) {
        if (mode == SparsityMode::kOff) {
            return;
        }
        const std::size_t w = max_weight(result.state, circuit.W, circuit.M);
        auto& rep = result.report;
        rep.max_weight_per_step.push_back(w);
        rep.max_weight = std::max(rep.max_weight, w);
        if (w > circuit.m && !rep.exceeded) {
            rep.exceeded = true;
            rep.first_violation = static_cast<long>(step);
            if (mode == SparsityMode::kEnforce) {
                throw SparsityViolation(step, w, circuit.m);
            }
        }
    };
    record(0);
    for (std::size_t t = 0; t < circuit.instructions.size(); ++t) {
        apply_instruction(result.state, circuit.instructions[t], circuit, input);
        record(t + 1);
    }
    return result;
}

OutcomeDistribution measure_distribution(const SparseState& state,
                                         const std::vector<std::size_t>& positions) {
    for (const auto p : positions) {
        check_position(state, p);
    }
    OutcomeDistribution dist;
    BitString outcome(positions.size());
    for (const auto& [key, a] : state.entries()) {
        for (std::size_t i = 0; i < positions.size(); ++i) {
            outcome.set(i, key.get(positions[i]));
        }
        dist[outcome] += std::norm(a);
    }
    return dist;
}

double total_variation(const OutcomeDistribution& a, const OutcomeDistribution& b) {
    double total = 0.0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            total += std::abs(ia->second);
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            total += std::abs(ib->second);
            ++ib;
        } else {
            total += std::abs(ia->second - ib->second);
            ++ia;
            ++ib;
        }
    }
    return total / 2.0;
}

}  // namespace qramc
