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
#include <stdexcept>
#include <vector>

#include "qramc/prefix_sum_tree.hpp"
#include "qramc/sparse_state.hpp"

namespace qramc {

class AllocatorError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Gate-level approximation of the uniform superposition |k>|0> ->
/// k^{-1/2} sum_{j=1..k} |k>|j> for 1 <= k <= max_k.
///
/// t = log2(K) Hadamards produce a uniform state over K values; a reversible
/// interval map then folds the first k*floor(K/k) of them onto j = 1..k in
/// equal runs and sends the rest to a flagged invalid index. The simulator
/// applies the coherent action of this circuit on |k>|0>:
///
///     sqrt(floor(K/k)/K) sum_{j<=k} |j>  +  sqrt((K mod k)/K) |invalid>
///
/// so the only error is the remainder, with
/// || U|k,0> - U_exact|k,0> || = sqrt(2 - 2 sqrt(1 - (K mod k)/K)).
struct ApproxSuperpose {
    std::size_t max_k = 1;
    double epsilon = 0.25;
    std::uint64_t K = 1;
    std::size_t t = 0;

    /// Smallest power-of-2 K with K >= max_k / eps^2 and distance(k) <= eps
    /// for every k <= max_k. Throws std::invalid_argument unless
    /// 0 < eps < 1/2 and max_k >= 1.
    static ApproxSuperpose plan(std::size_t max_k, double epsilon);

    /// Squared amplitude sent to the invalid index for this k.
    double remainder(std::size_t k) const;
    /// Norm of the difference from the exact map on |k>|0>.
    double distance(std::size_t k) const;

    std::size_t hadamard_count() const { return t; }
    /// The interval map is charged once per operand bit (t input bits,
    /// the k register and the invalid flag).
    std::size_t interval_map_cost() const { return t + width_for(max_k) + 1; }
    std::size_t gate_count() const { return hadamard_count() + interval_map_cost(); }
};

enum class SuperposeMode { kExact, kApprox };

struct SuperposeConfig {
    SuperposeMode mode = SuperposeMode::kExact;
    ApproxSuperpose approx{};

    static SuperposeConfig exact() { return {}; }
    static SuperposeConfig approximate(std::size_t max_k, double epsilon) {
        return {SuperposeMode::kApprox, ApproxSuperpose::plan(max_k, epsilon)};
    }
};

/// Counters accumulated across allocator calls.
struct AllocStats {
    std::size_t superpose_uses = 0;
    std::size_t alloc_calls = 0;
    std::size_t free_calls = 0;
    /// Squared norm projected away by approximate superposition steps.
    double remainder_mass = 0.0;
};

/// The reflection I - 2|w><w|, w proportional to |0> - |u_k>, on register `j`
/// with k read from register `k`. It maps |k>|0> to |k>|u_k> and is its own
/// inverse. Branches with k = 0 are left alone. `invalid` is the index that
/// carries the approximate remainder (ignored in exact mode).
void superpose_reflection(SparseState& state, Reg k, Reg j, const SuperposeConfig& config,
                          std::uint64_t invalid, const Controls& controls = {});

/// Exact superposition primitive. Throws AllocatorError if an active branch
/// has k = 0 or j != 0.
void u_superpose_exact(SparseState& state, Reg k, Reg j, const Controls& controls = {});

/// Approximate superposition (no projection). Throws AllocatorError if an
/// active branch has k = 0, k > max_k, or j != 0. `j` must be able to hold
/// max_k + 1, which is used as the invalid index.
void u_superpose_approx(SparseState& state, Reg k, Reg j, const ApproxSuperpose& approx,
                        const Controls& controls = {});

/// Where the allocator lives in a state.
struct AllocRegisters {
    std::size_t leaves = 1;
    /// Start of the PrefixEncoding (encoding_width(leaves) bits).
    std::size_t encoding = 0;
    /// Output index register, width index_width(leaves).
    std::size_t index = 0;
    /// Scratch rank register, width rank_width(leaves); zero outside calls.
    std::size_t rank = 0;

    static std::size_t index_width(std::size_t leaves) { return width_for(leaves); }
    static std::size_t rank_width(std::size_t leaves) { return width_for(leaves + 1); }
    Reg encoding_reg() const { return {encoding, PrefixSumTree::encoding_width(leaves)}; }
    Reg index_reg() const { return {index, index_width(leaves)}; }
    Reg rank_reg() const { return {rank, rank_width(leaves)}; }
    /// The root label, i.e. |F| (the only leaf bit when leaves = 1).
    Reg count_reg() const { return {encoding, leaves == 1 ? 1 : PrefixSumTree::label_width(leaves)}; }
    std::uint64_t invalid_rank() const { return leaves + 1; }
};

/// |P(F)>|0> -> |F|^{-1/2} sum_{i in F} |P(F \ {i})>|i> on active branches.
///
/// Steps: superpose the rank register over [1, |F|], then descend the tree
/// to leaf i = select(F, j), decrement the labels on the path, write i into
/// the index register and clear the rank by subtracting the left counts seen
/// on the way down. In approximate mode branches left on the invalid rank are
/// projected out and their mass is added to stats.remainder_mass.
///
/// Throws AllocatorError if an active branch has F empty, a nonzero index or
/// rank register, or an undecodable encoding.
void u_alloc(SparseState& state, const AllocRegisters& regs, const SuperposeConfig& config,
             AllocStats& stats, const Controls& controls = {});

/// Inverse of u_alloc: |P(F \ {i})>|i> -> |P(F)>|0> after uniform
/// superposition. Throws AllocatorError if an active branch has a zero index,
/// an index already free, or a nonzero rank register.
void u_free(SparseState& state, const AllocRegisters& regs, const SuperposeConfig& config,
            AllocStats& stats, const Controls& controls = {});

}  // namespace qramc
