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

#include "qramc/layout.hpp"

#include <stdexcept>
#include <string>

namespace qramc {

void write_block(BitString& bits, std::size_t base, const BlockFormat& fmt, std::uint64_t block,
                 const NodeBlock& nb) {
    const std::size_t o = base + fmt.block_off(block);
    bits.set_uint(o + fmt.len_off(), fmt.len_width(), nb.z.size());
    bits.copy_bits(o + fmt.z_off(), nb.z, 0, nb.z.size());
    for (std::size_t i = nb.z.size(); i < fmt.ell; ++i) {
        bits.set(o + fmt.z_off() + i, false);
    }
    bits.set_uint(o + fmt.parent_off(), fmt.link_width(), nb.parent);
    bits.set_uint(o + fmt.child_off(0), fmt.link_width(), nb.left);
    bits.set_uint(o + fmt.child_off(1), fmt.link_width(), nb.right);
}

NodeBlock read_block(const BitString& bits, std::size_t base, const BlockFormat& fmt,
                     std::uint64_t block) {
    const std::size_t o = base + fmt.block_off(block);
    NodeBlock nb;
    const auto len = bits.get_uint(o + fmt.len_off(), fmt.len_width());
    if (len > fmt.ell) {
        throw EncodingError("block " + std::to_string(block) + " label length " +
                            std::to_string(len) + " exceeds word length");
    }
    nb.z = bits.slice(o + fmt.z_off(), static_cast<std::size_t>(len));
    if (!bits.range_is_zero(o + fmt.z_off() + len, fmt.ell - len)) {
        throw EncodingError("block " + std::to_string(block) + " has bits past its label");
    }
    nb.parent = bits.get_uint(o + fmt.parent_off(), fmt.link_width());
    nb.left = bits.get_uint(o + fmt.child_off(0), fmt.link_width());
    nb.right = bits.get_uint(o + fmt.child_off(1), fmt.link_width());
    return nb;
}

namespace {

void check_tau(const RadixTree& tree, const Layout& tau, std::size_t m) {
    if (tree.node_count() > 2 * m) {
        throw std::invalid_argument("tree has " + std::to_string(tree.node_count()) +
                                    " nodes, more than 2m=" + std::to_string(2 * m));
    }
    if (tau.size() != tree.node_count()) {
        throw std::invalid_argument("layout size does not match node count");
    }
    if (tau[0] != 1) {
        throw std::invalid_argument("layout must place the root in block 1");
    }
    std::vector<bool> used(2 * m + 1, false);
    for (const auto b : tau) {
        if (b < 1 || b > 2 * m) {
            throw std::invalid_argument("block " + std::to_string(b) + " outside [1, 2m]");
        }
        if (used[b]) {
            throw std::invalid_argument("layout is not injective: block " + std::to_string(b));
        }
        used[b] = true;
    }
}

}  // namespace

void encode_with_layout_into(BitString& bits, std::size_t base, const RadixTree& tree,
                             const Layout& tau, std::size_t m) {
    check_tau(tree, tau, m);
    const BlockFormat fmt{tree.ell(), m};
    for (std::size_t i = 0; i < fmt.total_width(); ++i) {
        bits.set(base + i, false);
    }
    auto link = [&](int v) -> std::uint64_t { return v < 0 ? 0 : tau[static_cast<std::size_t>(v)]; };
    for (std::size_t v = 0; v < tree.node_count(); ++v) {
        const auto& n = tree.nodes()[v];
        write_block(bits, base, fmt, tau[v],
                    {n.label, link(n.parent), link(n.child[0]), link(n.child[1])});
    }
}

BitString encode_with_layout(const RadixTree& tree, const Layout& tau, std::size_t m) {
    BitString out(BlockFormat{tree.ell(), m}.total_width());
    encode_with_layout_into(out, 0, tree, tau, m);
    return out;
}

DecodedLayout decode_layout(const BitString& bits, std::size_t base, std::size_t ell,
                            std::size_t m) {
    const BlockFormat fmt{ell, m};
    if (base + fmt.total_width() > bits.size()) {
        throw EncodingError("layout region runs past the end of the bit string");
    }
    // Gather the blocks reachable from block 1.
    std::vector<int> node_of(2 * m + 1, -1);
    std::vector<RadixNode> nodes;
    std::vector<std::uint64_t> block_of;
    std::vector<std::uint64_t> pending{1};
    node_of[1] = 0;
    nodes.emplace_back();
    block_of.push_back(1);
    std::vector<NodeBlock> raw;
    raw.push_back(read_block(bits, base, fmt, 1));
    for (std::size_t idx = 0; idx < nodes.size(); ++idx) {
        const NodeBlock nb = raw[idx];
        nodes[idx].label = nb.z;
        const std::uint64_t kids[2] = {nb.left, nb.right};
        for (int b = 0; b < 2; ++b) {
            const auto c = kids[b];
            if (c == 0) {
                continue;
            }
            if (c > 2 * m) {
                throw EncodingError("child link " + std::to_string(c) + " out of range");
            }
            if (node_of[c] >= 0) {
                throw EncodingError("block " + std::to_string(c) + " is linked twice");
            }
            node_of[c] = static_cast<int>(nodes.size());
            nodes[idx].child[b] = static_cast<int>(nodes.size());
            nodes.emplace_back();
            block_of.push_back(c);
            raw.push_back(read_block(bits, base, fmt, c));
            if (raw.back().parent != block_of[idx]) {
                throw EncodingError("block " + std::to_string(c) + " parent link is " +
                                    std::to_string(raw.back().parent) + ", expected " +
                                    std::to_string(block_of[idx]));
            }
            nodes.back().parent = static_cast<int>(idx);
        }
    }
    if (raw[0].parent != 0 || !raw[0].z.empty()) {
        throw EncodingError("root block must have no parent and an empty label");
    }
    for (std::uint64_t b = 2; b <= 2 * m; ++b) {
        if (node_of[b] < 0 && !bits.range_is_zero(base + fmt.block_off(b), fmt.block_width())) {
            throw EncodingError("unused block " + std::to_string(b) + " is not zero");
        }
    }
    std::vector<int> order;
    RadixTree tree = RadixTree::from_nodes(ell, nodes, &order);
    Layout tau(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        tau[static_cast<std::size_t>(order[i])] = block_of[i];
    }
    return {std::move(tree), std::move(tau)};
}

DecodedLayout decode_layout(const BitString& bits, std::size_t ell, std::size_t m) {
    if (bits.size() != BlockFormat{ell, m}.total_width()) {
        throw EncodingError("layout encoding has the wrong length");
    }
    return decode_layout(bits, 0, ell, m);
}

std::vector<std::size_t> free_blocks(const Layout& tau, std::size_t m) {
    std::vector<bool> used(2 * m + 1, false);
    for (const auto b : tau) {
        used[b] = true;
    }
    std::vector<std::size_t> out;
    for (std::size_t b = 1; b <= 2 * m; ++b) {
        if (!used[b]) {
            out.push_back(b);
        }
    }
    return out;
}

std::uint64_t count_layouts(const RadixTree& tree, std::size_t m) {
    const std::size_t r = tree.node_count();
    if (r > 2 * m) {
        throw std::invalid_argument("tree does not fit in 2m blocks");
    }
    // (2m-1)(2m-2)...(2m-r+1): one factor per non-root node.
    std::uint64_t n = 1;
    for (std::size_t i = 1; i < r; ++i) {
        const std::uint64_t f = 2 * m - i;
        if (n > UINT64_MAX / f) {
            throw std::overflow_error("layout count exceeds 64 bits");
        }
        n *= f;
    }
    return n;
}

std::vector<Layout> enumerate_taus(const RadixTree& tree, std::size_t m, std::uint64_t cap) {
    const auto total = count_layouts(tree, m);
    if (total > cap) {
        throw std::length_error("layout enumeration of " + std::to_string(total) +
                                " exceeds cap " + std::to_string(cap));
    }
    std::vector<Layout> out;
    out.reserve(static_cast<std::size_t>(total));
    Layout tau(tree.node_count(), 0);
    tau[0] = 1;
    std::vector<bool> used(2 * m + 1, false);
    used[1] = true;
    auto rec = [&](auto&& self, std::size_t v) -> void {
        if (v == tau.size()) {
            out.push_back(tau);
            return;
        }
        for (std::uint64_t b = 2; b <= 2 * m; ++b) {
            if (!used[b]) {
                used[b] = true;
                tau[v] = b;
                self(self, v + 1);
                used[b] = false;
            }
        }
    };
    rec(rec, 1);
    return out;
}

std::vector<BitString> enumerate_layouts(const RadixTree& tree, std::size_t m,
                                         std::uint64_t cap) {
    std::vector<BitString> out;
    for (const auto& tau : enumerate_taus(tree, m, cap)) {
        out.push_back(encode_with_layout(tree, tau, m));
    }
    return out;
}

}  // namespace qramc
