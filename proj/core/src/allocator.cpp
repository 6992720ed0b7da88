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

#include "qramc/allocator.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qramc {

ApproxSuperpose ApproxSuperpose::plan(std::size_t max_k, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw std::invalid_argument("approximation error must lie in (0, 1/2), got " +
                                    std::to_string(epsilon));
    }
    if (max_k < 1) {
        throw std::invalid_argument("max_k must be at least 1");
    }
    ApproxSuperpose a;
    a.max_k = max_k;
    a.epsilon = epsilon;
    const double target = static_cast<double>(max_k) / (epsilon * epsilon);
    constexpr std::uint64_t kCap = std::uint64_t{1} << 62;
    a.K = 1;
    while (static_cast<double>(a.K) < target) {
        if (a.K >= kCap) {
            throw std::invalid_argument("approximation error too small for 64-bit registers");
        }
        a.K *= 2;
    }
    auto within = [&] {
        for (std::size_t k = 1; k <= max_k; ++k) {
            if (a.distance(k) > epsilon) {
                return false;
            }
        }
        return true;
    };
    while (!within()) {
        if (a.K >= kCap) {
            throw std::invalid_argument("approximation error too small for 64-bit registers");
        }
        a.K *= 2;
    }
    a.t = log2_floor(a.K);
    return a;
}

double ApproxSuperpose::remainder(std::size_t k) const {
    return static_cast<double>(K % k) / static_cast<double>(K);
}

double ApproxSuperpose::distance(std::size_t k) const {
    const double rho = remainder(k);
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::sqrt(1.0 - rho)));
}

void superpose_reflection(SparseState& state, Reg k, Reg j, const SuperposeConfig& config,
                          std::uint64_t invalid, const Controls& controls) {
    const bool approx = config.mode == SuperposeMode::kApprox;
    if (approx && width_for(invalid) > j.width) {
        throw std::invalid_argument("rank register too narrow for the invalid index");
    }
    state.transform([&](const BitString& key, Amplitude a, const SparseState::Emit& emit) {
        if (!controls_active(key, controls)) {
            emit(key, a);
            return;
        }
        const std::uint64_t kv = k.read(key);
        if (kv == 0) {
            emit(key, a);
            return;
        }
        double in_amp = 1.0 / std::sqrt(static_cast<double>(kv));
        double rem_amp = 0.0;
        if (approx) {
            const auto K = config.approx.K;
            in_amp = std::sqrt(static_cast<double>(K / kv) / static_cast<double>(K));
            rem_amp = std::sqrt(static_cast<double>(K % kv) / static_cast<double>(K));
            if (invalid <= kv) {
                throw std::logic_error("invalid index collides with a valid rank");
            }
        }
        if (kv >= (std::uint64_t{1} << j.width)) {
            throw std::invalid_argument("rank register too narrow for k=" + std::to_string(kv));
        }
        const std::uint64_t x = j.read(key);
        double ux = 0.0;
        if (x >= 1 && x <= kv) {
            ux = in_amp;
        } else if (approx && x == invalid) {
            ux = rem_amp;
        }
        const double c = (x == 0 ? 1.0 : 0.0) - ux;
        emit(key, a);
        if (c == 0.0) {
            return;
        }
        BitString out = key;
        j.write(out, 0);
        emit(out, -c * a);
        for (std::uint64_t jj = 1; jj <= kv; ++jj) {
            j.write(out, jj);
            emit(out, c * in_amp * a);
        }
        if (rem_amp > 0.0) {
            j.write(out, invalid);
            emit(out, c * rem_amp * a);
        }
    });
}

namespace {

void check_superpose_input(const SparseState& state, Reg k, Reg j, std::size_t max_k,
                           const Controls& controls) {
    for (const auto& [key, a] : state.entries()) {
        if (!controls_active(key, controls)) {
            continue;
        }
        const auto kv = k.read(key);
        if (kv == 0) {
            throw AllocatorError("superposition over k=0 values in branch " + key.to_string());
        }
        if (kv > max_k) {
            throw AllocatorError("k=" + std::to_string(kv) + " exceeds planned max " +
                                 std::to_string(max_k));
        }
        if (!j.is_zero(key)) {
            throw AllocatorError("superposition target register is not |0> in branch " +
                                 key.to_string());
        }
    }
}

// Rank-to-leaf descent and its inverse, as one basis permutation:
//   (F, rank j in [1,|F|], index 0)  <->  (F \ {i}, rank 0, index i),  i = select(F, j).
// Every other basis state is fixed.
void descend(SparseState& state, const AllocRegisters& regs, const Controls& controls) {
    const Reg idx = regs.index_reg();
    const Reg rank = regs.rank_reg();
    state.permute([&](BitString& key) {
        if (!controls_active(key, controls)) {
            return;
        }
        const auto j = rank.read(key);
        const auto i = idx.read(key);
        if (i == 0 && j == 0) {
            return;
        }
        PrefixSumTree tree = PrefixSumTree::decode(key, regs.encoding, regs.leaves);
        if (i == 0 && j <= tree.count()) {
            // Walk root to leaf: at each node go left if j fits in the left
            // count, otherwise subtract it and go right. Labels on the path
            // drop by one and the rank is consumed.
            const std::size_t leaf = tree.select(static_cast<std::size_t>(j));
            tree.erase(leaf);
            tree.encode_into(key, regs.encoding);
            rank.write(key, 0);
            idx.write(key, leaf);
        } else if (j == 0 && i <= regs.leaves && !tree.contains(static_cast<std::size_t>(i))) {
            tree.insert(static_cast<std::size_t>(i));
            tree.encode_into(key, regs.encoding);
            rank.write(key, tree.rank(static_cast<std::size_t>(i)));
            idx.write(key, 0);
        }
    });
}

std::size_t check_alloc_input(const SparseState& state, const AllocRegisters& regs,
                              const Controls& controls) {
    std::size_t active = 0;
    const Reg idx = regs.index_reg();
    const Reg rank = regs.rank_reg();
    for (const auto& [key, a] : state.entries()) {
        if (!controls_active(key, controls)) {
            continue;
        }
        PrefixSumTree tree(regs.leaves);
        try {
            tree = PrefixSumTree::decode(key, regs.encoding, regs.leaves);
        } catch (const EncodingError& e) {
            throw AllocatorError(std::string("allocator region does not decode: ") + e.what());
        }
        if (tree.count() == 0) {
            throw AllocatorError("allocation requested with no free block");
        }
        if (!idx.is_zero(key) || !rank.is_zero(key)) {
            throw AllocatorError("allocation needs zeroed index and rank registers");
        }
        ++active;
    }
    return active;
}

std::size_t check_free_input(const SparseState& state, const AllocRegisters& regs,
                             const Controls& controls) {
    std::size_t active = 0;
    const Reg idx = regs.index_reg();
    const Reg rank = regs.rank_reg();
    for (const auto& [key, a] : state.entries()) {
        if (!controls_active(key, controls)) {
            continue;
        }
        PrefixSumTree tree(regs.leaves);
        try {
            tree = PrefixSumTree::decode(key, regs.encoding, regs.leaves);
        } catch (const EncodingError& e) {
            throw AllocatorError(std::string("allocator region does not decode: ") + e.what());
        }
        const auto i = idx.read(key);
        if (i == 0 || i > regs.leaves || tree.contains(static_cast<std::size_t>(i))) {
            throw AllocatorError("free of block " + std::to_string(i) +
                                 " which is not an allocated block");
        }
        if (!rank.is_zero(key)) {
            throw AllocatorError("free needs a zeroed rank register");
        }
        ++active;
    }
    return active;
}

}  // namespace

void u_superpose_exact(SparseState& state, Reg k, Reg j, const Controls& controls) {
    check_superpose_input(state, k, j, std::numeric_limits<std::size_t>::max(), controls);
    superpose_reflection(state, k, j, SuperposeConfig::exact(), 0, controls);
}

void u_superpose_approx(SparseState& state, Reg k, Reg j, const ApproxSuperpose& approx,
                        const Controls& controls) {
    check_superpose_input(state, k, j, approx.max_k, controls);
    superpose_reflection(state, k, j, {SuperposeMode::kApprox, approx}, approx.max_k + 1,
                         controls);
}

void u_alloc(SparseState& state, const AllocRegisters& regs, const SuperposeConfig& config,
             AllocStats& stats, const Controls& controls) {
    if (check_alloc_input(state, regs, controls) == 0) {
        return;
    }
    const Reg rank = regs.rank_reg();
    const Reg count = regs.count_reg();
    if (config.mode == SuperposeMode::kApprox) {
        for (const auto& [key, a] : state.entries()) {
            if (controls_active(key, controls) && count.read(key) > config.approx.max_k) {
                throw AllocatorError("free count exceeds the planned approximation range");
            }
        }
    }
    superpose_reflection(state, count, rank, config, regs.invalid_rank(), controls);
    ++stats.superpose_uses;
    if (config.mode == SuperposeMode::kApprox) {
        const auto invalid = regs.invalid_rank();
        stats.remainder_mass += state.project([&](const BitString& key) {
            return !controls_active(key, controls) || rank.read(key) != invalid;
        });
    }
    descend(state, regs, controls);
    ++stats.alloc_calls;
}

void u_free(SparseState& state, const AllocRegisters& regs, const SuperposeConfig& config,
            AllocStats& stats, const Controls& controls) {
    if (check_free_input(state, regs, controls) == 0) {
        return;
    }
    const Reg rank = regs.rank_reg();
    descend(state, regs, controls);
    superpose_reflection(state, regs.count_reg(), rank, config, regs.invalid_rank(), controls);
    ++stats.superpose_uses;
    if (config.mode == SuperposeMode::kApprox) {
        stats.remainder_mass += state.project([&](const BitString& key) {
            return !controls_active(key, controls) || rank.is_zero(key);
        });
    }
    ++stats.free_calls;
}

}  // namespace qramc
