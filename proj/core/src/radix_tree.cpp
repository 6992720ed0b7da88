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

#include "qramc/radix_tree.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace qramc {

std::size_t common_prefix(const BitString& a, std::size_t ao, const BitString& b,
                          std::size_t bo, std::size_t limit) {
    std::size_t n = 0;
    while (n < limit && a.get(ao + n) == b.get(bo + n)) {
        ++n;
    }
    return n;
}

RadixTree::RadixTree(std::size_t ell) : ell_(ell), nodes_(1) {}

RadixTree RadixTree::from_set(std::size_t ell, std::vector<BitString> elements) {
    for (const auto& e : elements) {
        if (e.size() != ell) {
            throw std::invalid_argument("element '" + e.to_string() + "' does not have length " +
                                        std::to_string(ell));
        }
    }
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());

    RadixTree t(ell);
    // Elements of [lo, hi) share the first `offset` bits; split them by the
    // next bit and hang each side off `v` under its longest common prefix.
    std::function<void(int, std::size_t, std::size_t, std::size_t)> split =
        [&](int v, std::size_t lo, std::size_t hi, std::size_t offset) {
            if (offset == ell) {
                return;
            }
            std::size_t mid = lo;
            while (mid < hi && !elements[mid].get(offset)) {
                ++mid;
            }
            const std::size_t ranges[2][2] = {{lo, mid}, {mid, hi}};
            for (int b = 0; b < 2; ++b) {
                const auto [a, z] = ranges[b];
                if (a == z) {
                    continue;
                }
                // Sorted order puts the two most different strings at the ends.
                const std::size_t len =
                    common_prefix(elements[a], offset, elements[z - 1], offset, ell - offset);
                RadixNode child;
                child.label = elements[a].slice(offset, len);
                child.parent = v;
                const int id = static_cast<int>(t.nodes_.size());
                t.nodes_.push_back(std::move(child));
                t.nodes_[static_cast<std::size_t>(v)].child[b] = id;
                split(id, a, z, offset + len);
            }
        };
    split(0, 0, elements.size(), 0);
    return t;
}

RadixTree RadixTree::from_nodes(std::size_t ell, const std::vector<RadixNode>& nodes,
                                std::vector<int>* order) {
    if (nodes.empty()) {
        throw EncodingError("tree has no root");
    }
    RadixTree t(ell);
    t.nodes_.clear();
    std::vector<int> canon(nodes.size(), -1);
    const std::size_t max_depth = nodes.size() + 1;
    std::function<void(int, int, std::size_t, std::size_t)> visit =
        [&](int in, int parent, std::size_t depth, std::size_t hops) {
            if (in < 0 || static_cast<std::size_t>(in) >= nodes.size()) {
                throw EncodingError("child link out of range");
            }
            if (canon[static_cast<std::size_t>(in)] >= 0 || hops > max_depth) {
                throw EncodingError("tree links contain a cycle or shared child");
            }
            const auto& src = nodes[static_cast<std::size_t>(in)];
            const int id = static_cast<int>(t.nodes_.size());
            canon[static_cast<std::size_t>(in)] = id;
            RadixNode out;
            out.label = src.label;
            out.parent = parent;
            t.nodes_.push_back(out);
            const std::size_t d = depth + src.label.size();
            if (d > ell) {
                throw EncodingError("path longer than the word length");
            }
            int kids = 0;
            for (int b = 0; b < 2; ++b) {
                const int c = src.child[b];
                if (c < 0) {
                    continue;
                }
                ++kids;
                const auto& cl = nodes[static_cast<std::size_t>(c)].label;
                if (cl.empty() || cl.get(0) != (b == 1)) {
                    throw EncodingError("child label missing or in the wrong slot");
                }
                if (nodes[static_cast<std::size_t>(c)].parent != in) {
                    throw EncodingError("parent link does not match child link");
                }
                const int cid = static_cast<int>(t.nodes_.size());
                t.nodes_[static_cast<std::size_t>(id)].child[b] = cid;
                visit(c, id, d, hops + 1);
            }
            if (kids == 0 && in != 0 && d != ell) {
                throw EncodingError("leaf at depth " + std::to_string(d) + ", expected " +
                                    std::to_string(ell));
            }
            if (kids > 0 && d == ell) {
                throw EncodingError("internal node at full depth");
            }
            if (kids == 1 && in != 0) {
                throw EncodingError("non-root node with a single child");
            }
        };
    if (!nodes[0].label.empty() || nodes[0].parent >= 0) {
        throw EncodingError("root must have an empty label and no parent");
    }
    visit(0, -1, 0, 0);
    if (t.nodes_.size() != nodes.size()) {
        throw EncodingError("tree has unreachable nodes");
    }
    if (order != nullptr) {
        *order = canon;
    }
    return t;
}

std::vector<BitString> RadixTree::to_set() const {
    std::vector<BitString> out;
    BitString path(ell_);
    std::function<void(int, std::size_t)> walk = [&](int v, std::size_t depth) {
        const auto& n = node(v);
        path.copy_bits(depth, n.label, 0, n.label.size());
        depth += n.label.size();
        if (n.is_leaf()) {
            if (v != 0) {
                out.push_back(path);
            }
            return;
        }
        for (const int c : n.child) {
            if (c >= 0) {
                walk(c, depth);
            }
        }
    };
    walk(0, 0);
    return out;
}

bool RadixTree::contains(const BitString& e) const {
    if (e.size() != ell_) {
        return false;
    }
    int v = 0;
    std::size_t off = 0;
    while (off < ell_) {
        const int c = node(v).child[e.get(off) ? 1 : 0];
        if (c < 0) {
            return false;
        }
        const auto& lab = node(c).label;
        if (common_prefix(e, off, lab, 0, lab.size()) != lab.size()) {
            return false;
        }
        off += lab.size();
        v = c;
    }
    return v != 0;
}

std::size_t RadixTree::depth(int v) const {
    std::size_t d = 0;
    for (; v >= 0; v = node(v).parent) {
        d += node(v).label.size();
    }
    return d;
}

std::string RadixTree::dump() const {
    std::ostringstream os;
    std::function<void(int, int)> walk = [&](int v, int indent) {
        const auto& n = node(v);
        os << std::string(static_cast<std::size_t>(indent) * 2, ' ');
        os << (v == 0 ? "(root)" : n.label.to_string());
        if (v != 0 && n.is_leaf()) {
            os << " *";
        }
        os << '\n';
        for (const int c : n.child) {
            if (c >= 0) {
                walk(c, indent + 1);
            }
        }
    };
    walk(0, 0);
    return os.str();
}

}  // namespace qramc
