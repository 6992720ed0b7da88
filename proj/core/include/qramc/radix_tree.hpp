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
#include <string>
#include <vector>

#include "qramc/bits.hpp"

namespace qramc {

/// A node of a radix tree. `label` is the edge label from the parent (empty
/// for the root). child[b] is the child whose label starts with bit b, or -1.
struct RadixNode {
    BitString label;
    int parent = -1;
    std::array<int, 2> child{-1, -1};

    bool is_leaf() const { return child[0] < 0 && child[1] < 0; }
    friend bool operator==(const RadixNode&, const RadixNode&) = default;
};

/// Edge-labelled binary tree storing a set of ell-bit strings. Every
/// root-to-leaf label concatenation has length ell, non-root internal nodes
/// have two children, and only the root may have a single child.
///
/// Nodes are stored in preorder with the 0-child first; node 0 is the root.
/// Since the tree for a set is unique, two trees are equal iff their sets are.
class RadixTree {
  public:
    explicit RadixTree(std::size_t ell = 0);

    /// Throws std::invalid_argument if an element does not have length ell.
    static RadixTree from_set(std::size_t ell, std::vector<BitString> elements);

    /// Builds a tree from explicit nodes (any order, root first) and checks
    /// every structural rule. Throws EncodingError on violation. The result is
    /// renumbered into canonical preorder; `order`, if given, receives the
    /// canonical index of each input node.
    static RadixTree from_nodes(std::size_t ell, const std::vector<RadixNode>& nodes,
                                std::vector<int>* order = nullptr);

    std::size_t ell() const { return ell_; }
    /// |R(S)|, counting the root.
    std::size_t node_count() const { return nodes_.size(); }
    const std::vector<RadixNode>& nodes() const { return nodes_; }
    const RadixNode& node(int v) const { return nodes_[static_cast<std::size_t>(v)]; }

    /// Sorted elements.
    std::vector<BitString> to_set() const;
    bool contains(const BitString& e) const;

    /// Number of bits from the root to node v.
    std::size_t depth(int v) const;

    /// Indented text: one node per line, "(root)" first, children indented two
    /// spaces under their parent, leaves suffixed with " *".
    std::string dump() const;

    friend bool operator==(const RadixTree&, const RadixTree&) = default;

  private:
    std::size_t ell_;
    std::vector<RadixNode> nodes_;
};

/// Longest common prefix length of a[ao..] and b[bo..], capped at `limit`.
std::size_t common_prefix(const BitString& a, std::size_t ao, const BitString& b,
                          std::size_t bo, std::size_t limit);

}  // namespace qramc
