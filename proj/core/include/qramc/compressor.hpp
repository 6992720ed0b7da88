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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qramc/allocator.hpp"
#include "qramc/circuit.hpp"
#include "qramc/qradix.hpp"
#include "qramc/simulator.hpp"

namespace qramc {

/// Space constants for compressed_qubits <= W + c1*log2(M) + c2*m*log2(M),
/// checked for every M in [4, 2^20] and power-of-2 m <= M.
inline constexpr std::size_t kSpaceC1 = 20;
inline constexpr std::size_t kSpaceC2 = 21;

/// Qubit map of a compressed execution: W work qubits, then the radix-tree
/// scratch, then the radix region and the allocator region.
struct CompressedLayout {
    std::size_t W = 0;
    std::size_t ell = 0;
    std::size_t m = 0;
    QrtLayout qrt;

    static CompressedLayout make(std::size_t W, std::size_t M, std::size_t m);
    static CompressedLayout make(const QramCircuit& circuit);

    std::size_t scratch_qubits() const { return qrt.scratch_width(); }
    std::size_t region_qubits() const { return qrt.region_width(); }
    std::size_t total() const { return W + scratch_qubits() + region_qubits(); }
    Reg address() const { return {0, ell}; }
    std::size_t swap_qubit() const { return ell; }
};

struct CompressionOptions {
    SuperposeMode mode = SuperposeMode::kExact;
    /// Approx mode: error per superposition use.
    std::optional<double> epsilon_per_use;
    /// Approx mode alternative: total budget eps' - eps, split as
    /// budget / (2T) per use.
    std::optional<double> error_budget;
    /// Instruction counts t after which the compressed state is compared with
    /// the image of the direct state. Empty disables the lockstep run.
    std::vector<std::size_t> checkpoints;

    static CompressionOptions exact() { return {}; }
    static CompressionOptions approx(double eps) {
        CompressionOptions o;
        o.mode = SuperposeMode::kApprox;
        o.epsilon_per_use = eps;
        return o;
    }
};

struct ResourceReport {
    std::size_t qubits_direct = 0;
    std::size_t qubits_compressed = 0;
    std::size_t region_qubits = 0;
    std::size_t scratch_qubits = 0;
    std::size_t rag_count = 0;
    std::size_t superpose_uses = 0;
    std::size_t lookups = 0;
    std::size_t toggles = 0;
    std::size_t word_ops = 0;
    std::size_t block_reads = 0;
    double remainder_mass = 0.0;
    /// 0 in exact mode.
    double epsilon_per_use = 0.0;
};

struct CompressedRun {
    CompressedLayout layout;
    SparseState state;
    ResourceReport report;
    /// Fidelity at each requested checkpoint, in order.
    std::vector<double> checkpoint_fidelity;
};

/// The per-use error implied by `options` for a circuit of T instructions,
/// or 0 in exact mode. Throws std::invalid_argument if approx mode lacks a
/// usable epsilon.
double per_use_epsilon(const CompressionOptions& options, std::size_t T);

/// Runs `circuit` with memory replaced by a quantum radix tree: non-RAG
/// instructions act on the work qubits unchanged and each RAG becomes a
/// radix-tree swap with e = address register and b = swap qubit.
///
/// Throws ValidationError for an illegal circuit and SparsityViolation when a
/// RAG would make the stored set exceed m.
CompressedRun compress_run(const QramCircuit& circuit, const BitString& input,
                           const CompressionOptions& options = CompressionOptions::exact());

/// sum alpha_{u,v} |u>|0>|R_Q(S_v)> for a direct-run state, S_v being the
/// addresses (as ell-bit strings) of the 1s in the memory substring v.
SparseState compressed_image(const SparseState& direct, const CompressedLayout& layout);

struct EquivalenceReport {
    double tv_distance = 0.0;
    /// 1e-9 in exact mode, superpose_uses * epsilon_per_use in approx mode.
    double threshold = 0.0;
    bool within_threshold = false;
    std::vector<double> checkpoint_fidelity;
    ResourceReport resources;
    OutcomeDistribution direct;
    OutcomeDistribution compressed;
};

inline constexpr double kExactTvThreshold = 1e-9;

/// Runs the circuit directly and compressed, then compares the exact
/// distributions over `measured` (work qubits). Lost remainder mass counts as
/// an extra outcome of the compressed distribution.
EquivalenceReport equivalence_check(const QramCircuit& circuit, const BitString& input,
                                    const std::vector<std::size_t>& measured,
                                    const CompressionOptions& options = CompressionOptions::exact());

/// A seeded random circuit (n = 2) that stays m-sparse for every input: a
/// candidate RAG is kept only if the memory weight stays <= m, otherwise a
/// random gate takes its place. Throws std::invalid_argument for illegal
/// parameters.
QramCircuit random_sparse_circuit(std::uint64_t seed, std::size_t W, std::size_t M,
                                  std::size_t m, std::size_t T);

}  // namespace qramc
