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

#include "qramc/prefix_sum_tree.hpp"

#include <stdexcept>
#include <string>

namespace qramc {

PrefixSumTree::PrefixSumTree(std::size_t leaves) : leaves_(leaves), counts_(2 * leaves, 0) {
    if (!is_power_of_two(leaves)) {
        throw std::invalid_argument("prefix-sum tree needs a power-of-2 leaf count, got " +
                                    std::to_string(leaves));
    }
}

PrefixSumTree PrefixSumTree::from_set(std::size_t leaves, const std::vector<std::size_t>& free) {
    PrefixSumTree t(leaves);
    for (const auto i : free) {
        t.insert(i);
    }
    return t;
}

std::size_t PrefixSumTree::encoding_width(std::size_t leaves) {
    return (leaves - 1) * label_width(leaves) + leaves;
}

PrefixSumTree PrefixSumTree::decode(const BitString& bits, std::size_t offset,
                                    std::size_t leaves) {
    PrefixSumTree t(leaves);
    const std::size_t lw = label_width(leaves);
    const std::size_t leaf_base = offset + (leaves - 1) * lw;
    for (std::size_t i = 0; i < leaves; ++i) {
        t.counts_[leaves + i] = bits.get(leaf_base + i) ? 1 : 0;
    }
    for (std::size_t v = leaves - 1; v >= 1; --v) {
        const auto stored = bits.get_uint(offset + (v - 1) * lw, lw);
        const auto sum = t.counts_[2 * v] + t.counts_[2 * v + 1];
        if (stored != sum) {
            throw EncodingError("prefix-sum label at node " + std::to_string(v) + " is " +
                                std::to_string(stored) + ", children sum to " +
                                std::to_string(sum));
        }
        t.counts_[v] = sum;
    }
    return t;
}

PrefixSumTree PrefixSumTree::decode(const BitString& bits) {
    std::size_t leaves = 1;
    while (encoding_width(leaves) < bits.size()) {
        leaves *= 2;
    }
    if (encoding_width(leaves) != bits.size()) {
        throw EncodingError("no prefix-sum encoding has length " + std::to_string(bits.size()));
    }
    return decode(bits, 0, leaves);
}

bool PrefixSumTree::contains(std::size_t i) const {
    if (i < 1 || i > leaves_) {
        return false;
    }
    return counts_[leaves_ - 1 + i] != 0;
}

std::vector<std::size_t> PrefixSumTree::free_set() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i <= leaves_; ++i) {
        if (contains(i)) {
            out.push_back(i);
        }
    }
    return out;
}

void PrefixSumTree::set_leaf(std::size_t i, bool value) {
    if (i < 1 || i > leaves_) {
        throw std::invalid_argument("leaf " + std::to_string(i) + " outside [1, " +
                                    std::to_string(leaves_) + "]");
    }
    std::size_t v = leaves_ - 1 + i;
    if ((counts_[v] != 0) == value) {
        return;
    }
    for (; v >= 1; v /= 2) {
        counts_[v] = value ? counts_[v] + 1 : counts_[v] - 1;
    }
}

void PrefixSumTree::insert(std::size_t i) { set_leaf(i, true); }
void PrefixSumTree::erase(std::size_t i) { set_leaf(i, false); }

std::size_t PrefixSumTree::select(std::size_t j) const {
    if (j < 1 || j > count()) {
        throw std::out_of_range("select rank " + std::to_string(j) + " outside [1, " +
                                std::to_string(count()) + "]");
    }
    std::size_t v = 1;
    while (v < leaves_) {
        const auto left = counts_[2 * v];
        if (j <= left) {
            v = 2 * v;
        } else {
            j -= left;
            v = 2 * v + 1;
        }
    }
    return v - leaves_ + 1;
}

std::size_t PrefixSumTree::rank(std::size_t i) const {
    if (i < 1 || i > leaves_) {
        throw std::out_of_range("leaf " + std::to_string(i) + " outside the tree");
    }
    std::size_t total = 0;
    std::size_t v = leaves_ - 1 + i;
    total += counts_[v];
    for (; v > 1; v /= 2) {
        if (v % 2 == 1) {
            total += counts_[v - 1];
        }
    }
    return total;
}

BitString PrefixSumTree::encode() const {
    BitString out(encoding_width(leaves_));
    encode_into(out, 0);
    return out;
}

void PrefixSumTree::encode_into(BitString& bits, std::size_t offset) const {
    const std::size_t lw = label_width(leaves_);
    for (std::size_t v = 1; v < leaves_; ++v) {
        bits.set_uint(offset + (v - 1) * lw, lw, counts_[v]);
    }
    const std::size_t leaf_base = offset + (leaves_ - 1) * lw;
    for (std::size_t i = 0; i < leaves_; ++i) {
        bits.set(leaf_base + i, counts_[leaves_ + i] != 0);
    }
}

}  // namespace qramc
