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
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qramc/bits.hpp"
#include "qramc/prefix_sum_tree.hpp"

namespace qramc {

/// Positive rational, used for the distance threshold so that every boundary
/// comparison is exact.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    /// Accepts "a", "a/b" or a finite decimal such as "0.25".
    static Rational parse(std::string_view text);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const;
};

using Point = std::vector<std::int64_t>;

/// Squared distance <= eps^2, in integer arithmetic.
bool within_distance(const Point& p, const Point& q, Rational eps);

/// Box coordinates floor(p(i) / w) with w = eps / sqrt(d), d = p.size().
struct HypergridId {
    std::vector<std::uint64_t> coords;
    friend bool operator==(const HypergridId&, const HypergridId&) = default;
    friend auto operator<=>(const HypergridId&, const HypergridId&) = default;
};

/// Exact: compares coordinate multiples of eps against p(i) * sqrt(d) on
/// squares. Throws std::invalid_argument for negative coordinates or eps <= 0.
HypergridId grid_id(const Point& p, Rational eps);

/// Two distinct boxes can hold points within eps of each other iff
/// sum_i max(0, |g(i) - g'(i)| - 1)^2 < d.
bool are_neighbours(const HypergridId& a, const HypergridId& b);

/// Every box that is a neighbour of `g` with all coordinates below `bound`,
/// in lexicographic order.
std::vector<HypergridId> neighbours(const HypergridId& g, std::uint64_t bound = UINT64_MAX);

/// (2 * ceil(sqrt d) + 1)^d - 1.
std::size_t neighbour_bound(std::size_t d);

/// Number of 1 bits.
std::size_t sparsity_count(const BitString& encoding);

/// Fitted bounds. One bits after r elements stay below
/// c * r * (log2 leaves + log2 n + kSparsityConst); bits touched per update
/// stay below c * log2(n * sigma) for k-ED and c * (2 sqrt(d) + 1)^d * log2 n
/// for closest pair.
inline constexpr double kSparsityConst = 2.0;
inline constexpr double kKedSparsityC = 1.0;
inline constexpr double kCpSparsityC = 2.0;
inline constexpr double kKedTouchC = 4.0;
inline constexpr double kCpTouchC = 24.0;

double ked_sparsity_bound(std::size_t r, std::size_t n, std::size_t sigma);
double cp_sparsity_bound(std::size_t r, std::size_t n, std::size_t leaves);
double ked_touch_bound(std::size_t n, std::size_t sigma);
double cp_touch_bound(std::size_t n, std::size_t d);

/// k-element-distinctness tree over indices [1, n] and labels [0, sigma).
/// Encoding: sigma-1 flag bits breadth first, then per label x a block of
/// n bits B_x (index i at bit i-1) and width_for(n) bits of count_x.
class KedTree {
  public:
    KedTree(std::size_t n, std::size_t k, std::size_t sigma);

    /// Builds the tree directly from its definition.
    static KedTree from_set(std::size_t n, std::size_t k, std::size_t sigma,
                            const std::vector<std::pair<std::size_t, std::uint64_t>>& S);

    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    std::size_t sigma() const { return sigma_; }
    std::size_t size() const { return size_; }

    /// Throws std::invalid_argument if i is already present or out of range.
    void insert(std::size_t i, std::uint64_t x);
    /// Throws std::invalid_argument if (i, x) is absent.
    void erase(std::size_t i, std::uint64_t x);
    bool query() const { return sigma_ > 1 ? flags_[1] != 0 : counts_[0] >= k_; }

    std::size_t count(std::uint64_t x) const { return counts_.at(x); }
    /// Flag of heap node v in [1, sigma).
    bool flag(std::size_t v) const { return flags_.at(v) != 0; }
    bool contains(std::size_t i, std::uint64_t x) const;

    std::size_t count_width() const { return width_for(n_); }
    std::size_t block_width() const { return n_ + count_width(); }
    std::size_t encoding_width() const { return sigma_ - 1 + sigma_ * block_width(); }
    BitString encode() const;

    /// Encoding bits read or written by the last insert or erase.
    std::size_t last_touched() const { return touched_; }

    friend bool operator==(const KedTree& a, const KedTree& b) { return a.encode() == b.encode(); }

  private:
    bool hot(std::size_t v) const;
    void refresh_path(std::uint64_t x);

    std::size_t n_;
    std::size_t k_;
    std::size_t sigma_;
    std::size_t size_ = 0;
    std::vector<std::uint8_t> flags_;          // heap nodes, index 0 unused
    std::vector<std::vector<bool>> b_;         // per label
    std::vector<std::size_t> counts_;          // per label
    std::vector<std::int64_t> owner_;          // per index, -1 if absent
    std::size_t touched_ = 0;
};

/// Closest-pair tree over point indices [1, n] (n a power of 2), points in
/// {0..L-1}^d and threshold eps. Leaves are hypergrid boxes, numbered by
/// concatenating coordinates of box_bits() bits each. Encoding: flag bits
/// breadth first, then per box external_x (width_for(n) bits) followed by the
/// prefix-sum encoding of S_x over n leaves.
class CpTree {
  public:
    CpTree(std::size_t n, std::size_t d, Rational eps, std::int64_t L);

    static CpTree from_set(std::size_t n, std::size_t d, Rational eps, std::int64_t L,
                           const std::vector<std::pair<std::size_t, Point>>& S);

    std::size_t n() const { return n_; }
    std::size_t d() const { return d_; }
    Rational eps() const { return eps_; }
    std::int64_t L() const { return L_; }
    std::size_t box_bits() const { return box_bits_; }
    std::size_t leaves() const { return leaves_; }
    std::size_t size() const { return size_; }

    /// Throws std::invalid_argument for a present or out-of-range index and
    /// std::out_of_range for a point outside the cube.
    void insert(std::size_t i, const Point& p);
    /// Throws std::invalid_argument unless point i is present at p.
    void erase(std::size_t i, const Point& p);
    bool query() const;

    std::uint64_t box_of(const Point& p) const;
    std::size_t set_size(std::uint64_t x) const;
    std::size_t external(std::uint64_t x) const;

    std::size_t external_width() const { return width_for(n_); }
    std::size_t block_width() const {
        return external_width() + PrefixSumTree::encoding_width(n_);
    }
    std::size_t encoding_width() const { return leaves_ - 1 + leaves_ * block_width(); }
    BitString encode() const;

    std::size_t last_touched() const { return touched_; }

    friend bool operator==(const CpTree& a, const CpTree& b) { return a.encode() == b.encode(); }

  private:
    struct Leaf {
        std::size_t external = 0;
        PrefixSumTree set;
    };

    void check_point(const Point& p) const;
    HypergridId box_id(std::uint64_t x) const;
    Leaf& leaf(std::uint64_t x);
    const Leaf* find_leaf(std::uint64_t x) const;
    std::vector<std::uint64_t> neighbour_leaves(std::uint64_t x) const;
    std::size_t only_member(std::uint64_t y);
    bool hot(std::size_t v) const;
    void refresh_path(std::uint64_t x);

    std::size_t n_;
    std::size_t d_;
    Rational eps_;
    std::int64_t L_;
    std::size_t box_bits_ = 0;
    std::size_t leaves_ = 1;
    std::size_t size_ = 0;
    std::vector<std::uint8_t> flags_;
    std::map<std::uint64_t, Leaf> occupied_;
    std::vector<Point> points_;  // index i-1; empty if absent
    std::size_t touched_ = 0;
};

}  // namespace qramc
