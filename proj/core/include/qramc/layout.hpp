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
#include <vector>

#include "qramc/bits.hpp"
#include "qramc/radix_tree.hpp"

namespace qramc {

/// Bit layout of the 2m node blocks for word length ell and capacity m.
///
/// Each block is (z length, z content left-justified in ell bits, parent,
/// left child, right child); links are block numbers in [0, 2m] with 0
/// meaning none. Block b (1-based) starts at (b-1) * block_width().
struct BlockFormat {
    std::size_t ell = 1;
    std::size_t m = 1;

    std::size_t blocks() const { return 2 * m; }
    std::size_t len_width() const { return width_for(ell); }
    std::size_t link_width() const { return width_for(2 * m); }
    std::size_t block_width() const { return len_width() + ell + 3 * link_width(); }
    std::size_t total_width() const { return blocks() * block_width(); }

    // Field offsets relative to the start of a block.
    std::size_t len_off() const { return 0; }
    std::size_t z_off() const { return len_width(); }
    std::size_t parent_off() const { return len_width() + ell; }
    std::size_t child_off(int b) const {
        return len_width() + ell + link_width() * static_cast<std::size_t>(1 + b);
    }
    std::size_t block_off(std::uint64_t b) const {
        return static_cast<std::size_t>(b - 1) * block_width();
    }
};

/// Block contents of one node before placement.
struct NodeBlock {
    BitString z;
    std::uint64_t parent = 0;
    std::uint64_t left = 0;
    std::uint64_t right = 0;

    friend bool operator==(const NodeBlock&, const NodeBlock&) = default;
};

void write_block(BitString& bits, std::size_t base, const BlockFormat& fmt, std::uint64_t block,
                 const NodeBlock& nb);
NodeBlock read_block(const BitString& bits, std::size_t base, const BlockFormat& fmt,
                     std::uint64_t block);

/// tau[v] is the block of canonical node v; tau[0] must be 1.
using Layout = std::vector<std::uint64_t>;

/// R_tau(S). Throws std::invalid_argument for a non-injective tau, tau(root)
/// != 1, a block outside [1, 2m], or more than 2m nodes.
BitString encode_with_layout(const RadixTree& tree, const Layout& tau, std::size_t m);
void encode_with_layout_into(BitString& bits, std::size_t base, const RadixTree& tree,
                             const Layout& tau, std::size_t m);

struct DecodedLayout {
    RadixTree tree;
    Layout tau;
};

/// Inverse of encode_with_layout. Throws EncodingError on any structural
/// problem, including nonzero bits in unused blocks.
DecodedLayout decode_layout(const BitString& bits, std::size_t base, std::size_t ell,
                            std::size_t m);
DecodedLayout decode_layout(const BitString& bits, std::size_t ell, std::size_t m);

/// Free blocks [2m] minus tau(R(S)), sorted.
std::vector<std::size_t> free_blocks(const Layout& tau, std::size_t m);

/// N_S = (2m-1)! / (2m-|R(S)|)!. Throws std::overflow_error past 64 bits and
/// std::invalid_argument when the tree has more than 2m nodes.
std::uint64_t count_layouts(const RadixTree& tree, std::size_t m);

/// Every valid tau in lexicographic order. Throws std::length_error when the
/// count would exceed `cap`.
std::vector<Layout> enumerate_taus(const RadixTree& tree, std::size_t m,
                                   std::uint64_t cap = 1'000'000);
std::vector<BitString> enumerate_layouts(const RadixTree& tree, std::size_t m,
                                         std::uint64_t cap = 1'000'000);

}  // namespace qramc
