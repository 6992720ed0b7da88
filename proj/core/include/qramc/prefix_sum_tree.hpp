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

namespace qramc {

/// Complete binary tree over `leaves` (a power of 2) leaves, 1-based, whose
/// internal nodes count the 1-valued leaves below them. Leaf i is 1 iff i is
/// in the free set F.
///
/// Nodes use heap numbering: node 1 is the root, node v has children 2v and
/// 2v+1, and leaf i is node leaves-1+i. Heap order is breadth-first order.
class PrefixSumTree {
  public:
    /// Tree with F empty.
    explicit PrefixSumTree(std::size_t leaves);

    /// Throws std::invalid_argument if an element is outside [1, leaves].
    static PrefixSumTree from_set(std::size_t leaves, const std::vector<std::size_t>& free);

    /// Bits in the canonical encoding: internal labels of label_width() bits,
    /// breadth first, then one bit per leaf.
    static std::size_t encoding_width(std::size_t leaves);
    static std::size_t label_width(std::size_t leaves) { return width_for(leaves); }

    /// Decodes `leaves` worth of encoding starting at `offset`. Throws
    /// EncodingError when a label disagrees with its children.
    static PrefixSumTree decode(const BitString& bits, std::size_t offset, std::size_t leaves);
    static PrefixSumTree decode(const BitString& bits);

    std::size_t leaves() const { return leaves_; }
    std::size_t count() const { return label(1); }
    /// Label of heap node v (a leaf's label is its bit).
    std::size_t label(std::size_t v) const { return counts_[v]; }

    bool contains(std::size_t i) const;
    std::vector<std::size_t> free_set() const;
    void insert(std::size_t i);
    void erase(std::size_t i);

    /// The j-th smallest free leaf (1-based j), found by descending from the
    /// root and comparing j against left-subtree counts.
    std::size_t select(std::size_t j) const;
    /// Number of free leaves <= i.
    std::size_t rank(std::size_t i) const;

    BitString encode() const;
    void encode_into(BitString& bits, std::size_t offset) const;

    friend bool operator==(const PrefixSumTree&, const PrefixSumTree&) = default;

  private:
    void set_leaf(std::size_t i, bool value);

    std::size_t leaves_;
    std::vector<std::size_t> counts_;  // index 0 unused
};

}  // namespace qramc
