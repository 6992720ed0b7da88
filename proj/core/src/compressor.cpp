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

#include "qramc/compressor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace qramc {

CompressedLayout CompressedLayout::make(std::size_t W, std::size_t M, std::size_t m) {
    if (M < 2 || !is_power_of_two(M)) {
        throw std::invalid_argument("compression needs M a power of 2 with M >= 2");
    }
    if (m < 1 || !is_power_of_two(m) || m > M) {
        throw std::invalid_argument("compression needs m a power of 2 in [1, M]");
    }
    CompressedLayout c;
    c.W = W;
    c.ell = log2_floor(M);
    c.m = m;
    if (W < c.ell + 1) {
        throw std::invalid_argument("W must hold the address register and swap bit");
    }
    const std::size_t scratch = QrtLayout::scratch_width(c.ell, m);
    c.qrt = QrtLayout::make(c.ell, m, W + scratch, W);
    return c;
}

CompressedLayout CompressedLayout::make(const QramCircuit& circuit) {
    return make(circuit.W, circuit.M, circuit.m);
}

double per_use_epsilon(const CompressionOptions& options, std::size_t T) {
    if (options.mode == SuperposeMode::kExact) {
        return 0.0;
    }
    double eps = 0.0;
    if (options.epsilon_per_use) {
        eps = *options.epsilon_per_use;
    } else if (options.error_budget) {
        eps = *options.error_budget / (2.0 * static_cast<double>(std::max<std::size_t>(T, 1)));
    } else {
        throw std::invalid_argument("approximate mode needs a per-use epsilon or an error budget");
    }
    if (!(eps > 0.0) || !(eps < 1.0)) {
        throw std::invalid_argument("per-use epsilon must lie in (0, 1), got " +
                                    std::to_string(eps));
    }
    return eps;
}

namespace {

void require_valid(const QramCircuit& circuit) {
    auto violations = validate_qram(circuit);
    if (!violations.empty()) {
        throw ValidationError(std::move(violations));
    }
}

std::vector<BitString> memory_set(const BitString& key, std::size_t W, std::size_t M,
                                  std::size_t ell) {
    std::vector<BitString> S;
    for (std::size_t i = 0; i < M; ++i) {
        if (key.get(W + i)) {
            BitString e(ell);
            e.set_uint(0, ell, i);
            S.push_back(std::move(e));
        }
    }
    return S;
}

}  // namespace

SparseState compressed_image(const SparseState& direct, const CompressedLayout& layout) {
    const std::size_t M = std::size_t{1} << layout.ell;
    if (direct.num_qubits() != layout.W + M) {
        throw std::invalid_argument("direct state does not match the compressed layout");
    }
    std::map<BitString, SparseState> canonical;
    std::vector<SparseState::Entry> entries;
    const BitString zero(layout.total());
    for (const auto& [key, a] : direct.entries()) {
        const BitString v = key.slice(layout.W, M);
        auto it = canonical.find(v);
        if (it == canonical.end()) {
            it = canonical
                     .emplace(v, prepare_canonical(memory_set(key, layout.W, M, layout.ell),
                                                   layout.qrt, zero))
                     .first;
        }
        for (const auto& [ck, ca] : it->second.entries()) {
            BitString full = ck;
            full.copy_bits(0, key, 0, layout.W);
            entries.emplace_back(std::move(full), a * ca);
        }
    }
    return SparseState::from_entries(layout.total(), std::move(entries));
}

CompressedRun compress_run(const QramCircuit& circuit, const BitString& input,
                           const CompressionOptions& options) {
    require_valid(circuit);
    if (input.size() != circuit.n) {
        throw std::invalid_argument("input has " + std::to_string(input.size()) +
                                    " bits, circuit expects " + std::to_string(circuit.n));
    }
    CompressedRun out;
    out.layout = CompressedLayout::make(circuit);
    const auto& layout = out.layout;
    const double eps = per_use_epsilon(options, circuit.T());
    const SuperposeConfig config = options.mode == SuperposeMode::kExact
                                       ? SuperposeConfig::exact()
                                       : SuperposeConfig::approximate(2 * circuit.m - 1, eps);

    out.state = prepare_canonical({}, layout.qrt, BitString(layout.total()));

    std::vector<std::size_t> checkpoints = options.checkpoints;
    std::sort(checkpoints.begin(), checkpoints.end());
    const bool lockstep = !checkpoints.empty();
    SparseState direct(circuit.total_qubits());
    std::size_t next_cp = 0;
    const auto check = [&](std::size_t t) {
        while (next_cp < checkpoints.size() && checkpoints[next_cp] == t) {
            out.checkpoint_fidelity.push_back(
                fidelity(compressed_image(direct, layout), out.state));
            ++next_cp;
        }
    };
    if (lockstep) {
        check(0);
    }

    QrtStats stats;
    std::size_t rags = 0;
    for (std::size_t t = 0; t < circuit.T(); ++t) {
        const auto& instr = circuit.instructions[t];
        if (std::holds_alternative<Rag>(instr)) {
            try {
                u_swap(out.state, layout.address(), layout.qrt, layout.swap_qubit(), config, stats);
            } catch (const CapacityError&) {
                throw SparsityViolation(t + 1, circuit.m + 1, circuit.m);
            }
            ++rags;
        } else {
            apply_instruction(out.state, instr, circuit, input);
        }
        if (lockstep) {
            apply_instruction(direct, instr, circuit, input);
            check(t + 1);
        }
    }
    if (next_cp < checkpoints.size()) {
        throw std::invalid_argument("checkpoint " + std::to_string(checkpoints[next_cp]) +
                                    " is past the end of the circuit");
    }

    auto& r = out.report;
    r.qubits_direct = circuit.total_qubits();
    r.qubits_compressed = layout.total();
    r.region_qubits = layout.region_qubits();
    r.scratch_qubits = layout.scratch_qubits();
    r.rag_count = rags;
    r.superpose_uses = stats.alloc.superpose_uses;
    r.lookups = stats.lookups;
    r.toggles = stats.toggles;
    r.word_ops = stats.word_ops;
    r.block_reads = stats.block_reads;
    r.remainder_mass = stats.alloc.remainder_mass;
    r.epsilon_per_use = eps;
    return out;
}

EquivalenceReport equivalence_check(const QramCircuit& circuit, const BitString& input,
                                    const std::vector<std::size_t>& measured,
                                    const CompressionOptions& options) {
    for (const auto q : measured) {
        if (q >= circuit.W) {
            throw std::invalid_argument("measured qubit " + std::to_string(q) +
                                        " is not a work qubit");
        }
    }
    const auto compressed = compress_run(circuit, input, options);
    const auto direct = run(circuit, input, SparsityMode::kEnforce);

    EquivalenceReport rep;
    rep.direct = measure_distribution(direct.state, measured);
    rep.compressed = measure_distribution(compressed.state, measured);
    const double lost = std::max(0.0, 1.0 - compressed.state.norm_squared());
    rep.tv_distance = std::min(1.0, total_variation(rep.direct, rep.compressed) + 0.5 * lost);
    rep.resources = compressed.report;
    rep.checkpoint_fidelity = compressed.checkpoint_fidelity;
    rep.threshold = options.mode == SuperposeMode::kExact
                        ? kExactTvThreshold
                        : static_cast<double>(rep.resources.superpose_uses) *
                              rep.resources.epsilon_per_use;
    rep.within_threshold = rep.tv_distance <= std::max(rep.threshold, kExactTvThreshold);
    return rep;
}

QramCircuit random_sparse_circuit(std::uint64_t seed, std::size_t W, std::size_t M,
                                  std::size_t m, std::size_t T) {
    QramCircuit c;
    c.n = 2;
    c.W = W;
    c.M = M;
    c.m = m;
    const auto header = validate_qram(c);
    if (!header.empty()) {
        throw std::invalid_argument("infeasible parameters: " + header.front().message);
    }

    std::mt19937_64 rng(seed);
    const auto uniform = [&](std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    };
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

    std::vector<SparseState> states;
    std::vector<BitString> inputs;
    for (std::uint64_t x = 0; x < 4; ++x) {
        BitString in(2);
        in.set_uint(0, 2, x);
        inputs.push_back(in);
        states.emplace_back(c.total_qubits());
    }

    static constexpr GateKind kSingle[] = {GateKind::H, GateKind::X, GateKind::H, GateKind::X,
                                           GateKind::Z, GateKind::S, GateKind::T, GateKind::U3};
    // Gates favour the address register and swap bit so RAGs do real work.
    const std::size_t active = log2_floor(M) + 1;
    const auto pick_qubit = [&]() { return uniform(10) < 8 ? uniform(active) : uniform(W); };
    const auto random_gate = [&]() -> Instruction {
        const auto roll = uniform(10);
        if (roll < 2 && W >= 2) {
            const auto ctl = pick_qubit();
            auto tgt = uniform(W - 1);
            if (tgt >= ctl) {
                ++tgt;
            }
            return ApplyGate{{GateKind::CNOT, {static_cast<int>(ctl), static_cast<int>(tgt)}}};
        }
        if (roll < 3 && W >= 2) {
            const auto addr = uniform(W);
            auto tgt = uniform(W - 1);
            if (tgt >= addr) {
                ++tgt;
            }
            return Read{{static_cast<int>(addr)}, static_cast<int>(tgt)};
        }
        GateSpec g;
        g.kind = kSingle[uniform(std::size(kSingle))];
        g.targets = {static_cast<int>(pick_qubit())};
        if (g.kind == GateKind::U3) {
            g.angles = {angle(rng), angle(rng), angle(rng)};
        }
        return ApplyGate{g};
    };

    for (std::size_t t = 0; t < T; ++t) {
        Instruction instr = random_gate();
        if (uniform(10) < 4) {
            std::vector<SparseState> trial = states;
            bool ok = true;
            for (auto& s : trial) {
                apply_rag(s, c);
                if (max_weight(s, W, M) > m) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                states = std::move(trial);
                c.instructions.push_back(Rag{});
                continue;
            }
        }
        for (std::size_t i = 0; i < states.size(); ++i) {
            apply_instruction(states[i], instr, c, inputs[i]);
        }
        c.instructions.push_back(std::move(instr));
    }
    return c;
}

}  // namespace qramc
