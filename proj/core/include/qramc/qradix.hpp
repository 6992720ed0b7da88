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
#include <functional>
#include <stdexcept>
#include <vector>

#include "qramc/allocator.hpp"
#include "qramc/layout.hpp"
#include "qramc/sparse_state.hpp"

namespace qramc {

/// Raised when a toggle would insert into a tree already holding m elements.
class CapacityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Qubit positions of a quantum radix tree and the scratch registers its
/// operations use. The region is the 2m node blocks followed by the
/// prefix-sum encoding of the free blocks (2m leaves). Scratch registers are
/// zero between operations.
struct QrtLayout {
    std::size_t ell = 1;
    std::size_t m = 1;
    std::size_t radix = 0;
    std::size_t alloc = 0;

    // Scratch.
    std::size_t found = 0;
    std::size_t split = 0;
    std::size_t cur = 0;
    std::size_t off = 0;
    std::size_t idx_n = 0;
    std::size_t idx_s = 0;
    std::size_t rank = 0;
    std::size_t ws = 0;
    std::size_t zs = 0;

    /// Region at `region_base`; scratch starting at `scratch_base`.
    static QrtLayout make(std::size_t ell, std::size_t m, std::size_t region_base,
                          std::size_t scratch_base);
    /// Region at 0 followed directly by scratch.
    static QrtLayout standalone(std::size_t ell, std::size_t m);

    BlockFormat format() const { return {ell, m}; }
    std::size_t radix_width() const { return format().total_width(); }
    std::size_t alloc_width() const { return PrefixSumTree::encoding_width(2 * m); }
    std::size_t region_width() const { return radix_width() + alloc_width(); }
    static std::size_t scratch_width(std::size_t ell, std::size_t m);
    std::size_t scratch_width() const { return scratch_width(ell, m); }
    std::size_t scratch_base() const { return found; }

    Reg cur_reg() const { return {cur, format().link_width()}; }
    Reg off_reg() const { return {off, width_for(ell)}; }
    Reg idx_n_reg() const { return {idx_n, format().link_width()}; }
    Reg idx_s_reg() const { return {idx_s, format().link_width()}; }
    Reg zs_len_reg() const { return {zs, width_for(ell)}; }
    AllocRegisters alloc_regs(std::size_t index) const;

    /// Hard cap on traversal depth in nodes.
    std::size_t depth_cap() const { return log2_ceil(m) + ell; }
};

/// Operation counters. Word operations count structured steps (one per
/// reversible sub-step applied across all branches); block reads count node
/// visits by the traversal, maximised over branches.
struct QrtStats {
    std::size_t lookups = 0;
    std::size_t toggles = 0;
    std::size_t word_ops = 0;
    std::size_t block_reads = 0;
    AllocStats alloc;
};

/// The set stored in the region of `key`, decoded classically.
std::vector<BitString> region_set(const BitString& key, const QrtLayout& L);

/// Writes the region for (S, tau) into `key`.
void write_region(BitString& key, const QrtLayout& L, const RadixTree& tree, const Layout& tau);

/// sum_tau N_S^{-1/2} |context with region R_tau(S), P(F_tau)>. Scratch in
/// `context` must be zero. Throws std::length_error past `cap` layouts.
SparseState prepare_canonical(const std::vector<BitString>& S, const QrtLayout& L,
                              const BitString& context, std::uint64_t cap = 1'000'000);
/// Over a standalone layout with zero scratch.
SparseState prepare_canonical(const std::vector<BitString>& S, std::size_t ell, std::size_t m,
                              std::uint64_t cap = 1'000'000);

/// Squared norm of branches whose scratch registers are not all zero.
double scratch_mass(const SparseState& state, const QrtLayout& L);

/// b ^= (e in S) on active branches.
void u_lookup(SparseState& state, Reg e, const QrtLayout& L, std::size_t b, QrtStats& stats,
              const Controls& controls = {});

/// |R_Q(S)> -> |R_Q(S xor {e})> on active branches. Throws CapacityError if
/// an active branch would insert into a set of size m.
void u_toggle(SparseState& state, Reg e, const QrtLayout& L, const SuperposeConfig& config,
              QrtStats& stats, const Controls& controls = {});

/// lookup(b), toggle controlled on b, lookup(b): inserts e and clears b when
/// e is absent and b = 1, removes e and sets b when e is present and b = 0.
void u_swap(SparseState& state, Reg e, const QrtLayout& L, std::size_t b,
            const SuperposeConfig& config, QrtStats& stats, const Controls& controls = {});

/// An operation on a state with a control list, as taken by the functions above.
using QrtOp = std::function<void(SparseState&, const Controls&)>;

/// Wraps `op` with one more control qubit.
QrtOp controlled(QrtOp op, std::size_t control);

}  // namespace qramc
