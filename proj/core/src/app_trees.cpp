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

#include "qramc/app_trees.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qramc {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw std::overflow_error("integer overflow in exact geometry");
    }
    return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw std::overflow_error("integer overflow in exact geometry");
    }
    return out;
}

std::uint64_t isqrt(std::uint64_t x) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(x)));
    while (r > 0 && (r > UINT32_MAX || r * r > x)) {
        --r;
    }
    while (r + 1 <= UINT32_MAX && (r + 1) * (r + 1) <= x) {
        ++r;
    }
    return r;
}

std::size_t ceil_sqrt(std::size_t d) {
    std::size_t c = 0;
    while (c * c < d) {
        ++c;
    }
    return c;
}

void require_power_of_two(std::size_t v, const char* what) {
    if (v < 1 || !is_power_of_two(v)) {
        throw std::invalid_argument(std::string(what) + " must be a power of 2");
    }
}

}  // namespace

Rational Rational::parse(std::string_view text) {
    const auto bad = [&]() {
        return std::invalid_argument("not a positive rational: '" + std::string(text) + "'");
    };
    const auto digits = [&](std::string_view s) {
        if (s.empty() || s.size() > 15 ||
            !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            throw bad();
        }
        return static_cast<std::int64_t>(std::stoll(std::string(s)));
    };
    Rational r;
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        r.num = digits(text.substr(0, slash));
        r.den = digits(text.substr(slash + 1));
    } else if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const auto whole = text.substr(0, dot);
        const auto frac = text.substr(dot + 1);
        r.den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) {
            r.den *= 10;
        }
        r.num = (whole.empty() ? 0 : digits(whole)) * r.den + digits(frac);
    } else {
        r.num = digits(text);
    }
    if (r.num <= 0 || r.den <= 0) {
        throw bad();
    }
    const auto g = std::gcd(r.num, r.den);
    r.num /= g;
    r.den /= g;
    return r;
}

std::string Rational::to_string() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

bool within_distance(const Point& p, const Point& q, Rational eps) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("points of different dimension");
    }
    std::uint64_t sq = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto diff = static_cast<std::uint64_t>(std::llabs(p[i] - q[i]));
        sq = checked_add(sq, checked_mul(diff, diff));
    }
    const auto den = static_cast<std::uint64_t>(eps.den);
    const auto num = static_cast<std::uint64_t>(eps.num);
    return checked_mul(checked_mul(den, den), sq) <= checked_mul(num, num);
}

HypergridId grid_id(const Point& p, Rational eps) {
    if (eps.num <= 0 || eps.den <= 0) {
        throw std::invalid_argument("grid width needs eps > 0");
    }
    const std::uint64_t d = p.size();
    const auto a = static_cast<std::uint64_t>(eps.num);
    const auto b = static_cast<std::uint64_t>(eps.den);
    HypergridId id;
    id.coords.reserve(d);
    for (const auto c : p) {
        if (c < 0) {
            throw std::invalid_argument("grid coordinates must be nonnegative");
        }
        // floor(c * b * sqrt(d) / a) = floor(isqrt(c^2 b^2 d) / a).
        const auto cb = checked_mul(static_cast<std::uint64_t>(c), b);
        id.coords.push_back(isqrt(checked_mul(checked_mul(cb, cb), d)) / a);
    }
    return id;
}

bool are_neighbours(const HypergridId& a, const HypergridId& b) {
    if (a.coords.size() != b.coords.size()) {
        throw std::invalid_argument("boxes of different dimension");
    }
    if (a == b) {
        return false;
    }
    std::uint64_t gap = 0;
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
        const auto lo = std::min(a.coords[i], b.coords[i]);
        const auto hi = std::max(a.coords[i], b.coords[i]);
        const auto g = hi - lo > 0 ? hi - lo - 1 : 0;
        gap = checked_add(gap, checked_mul(g, g));
    }
    return gap < a.coords.size();
}

std::vector<HypergridId> neighbours(const HypergridId& g, std::uint64_t bound) {
    const std::size_t d = g.coords.size();
    const auto reach = static_cast<std::int64_t>(ceil_sqrt(d));
    std::vector<HypergridId> out;
    std::vector<std::int64_t> off(d, -reach);
    while (true) {
        HypergridId cand;
        bool ok = true;
        for (std::size_t i = 0; i < d && ok; ++i) {
            const auto v = static_cast<std::int64_t>(g.coords[i]) + off[i];
            ok = v >= 0 && static_cast<std::uint64_t>(v) < bound;
            cand.coords.push_back(static_cast<std::uint64_t>(v));
        }
        if (ok && are_neighbours(g, cand)) {
            out.push_back(std::move(cand));
        }
        std::size_t i = d;
        while (i > 0 && off[i - 1] == reach) {
            off[i - 1] = -reach;
            --i;
        }
        if (i == 0) {
            break;
        }
        ++off[i - 1];
    }
    return out;
}

std::size_t neighbour_bound(std::size_t d) {
    std::size_t side = 2 * ceil_sqrt(d) + 1;
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        total *= side;
    }
    return total - 1;
}

std::size_t sparsity_count(const BitString& encoding) { return encoding.popcount(); }

double ked_sparsity_bound(std::size_t r, std::size_t n, std::size_t sigma) {
    return kKedSparsityC * static_cast<double>(r) *
           (std::log2(static_cast<double>(sigma)) + std::log2(static_cast<double>(n)) +
            kSparsityConst);
}

double cp_sparsity_bound(std::size_t r, std::size_t n, std::size_t leaves) {
    return kCpSparsityC * static_cast<double>(r) *
           (std::log2(static_cast<double>(leaves)) + std::log2(static_cast<double>(n)) +
            kSparsityConst);
}

double ked_touch_bound(std::size_t n, std::size_t sigma) {
    return kKedTouchC * std::log2(static_cast<double>(n) * static_cast<double>(sigma));
}

double cp_touch_bound(std::size_t n, std::size_t d) {
    const double dd = static_cast<double>(d);
    return kCpTouchC * std::pow(2.0 * std::sqrt(dd) + 1.0, dd) *
           std::log2(static_cast<double>(n));
}

// KedTree

KedTree::KedTree(std::size_t n, std::size_t k, std::size_t sigma)
    : n_(n), k_(k), sigma_(sigma) {
    if (n < 1) {
        throw std::invalid_argument("k-ED tree needs n >= 1");
    }
    if (k < 1) {
        throw std::invalid_argument("k-ED tree needs k >= 1");
    }
    require_power_of_two(sigma, "alphabet size");
    flags_.assign(sigma, 0);
    b_.assign(sigma, std::vector<bool>(n, false));
    counts_.assign(sigma, 0);
    owner_.assign(n, -1);
}

KedTree KedTree::from_set(std::size_t n, std::size_t k, std::size_t sigma,
                          const std::vector<std::pair<std::size_t, std::uint64_t>>& S) {
    KedTree t(n, k, sigma);
    for (const auto& [i, x] : S) {
        if (i < 1 || i > n || x >= sigma) {
            throw std::invalid_argument("element outside [1, n] x [0, sigma)");
        }
        if (t.owner_[i - 1] >= 0) {
            throw std::invalid_argument("index " + std::to_string(i) + " appears twice");
        }
        t.owner_[i - 1] = static_cast<std::int64_t>(x);
        t.b_[x][i - 1] = true;
        ++t.counts_[x];
        ++t.size_;
    }
    for (std::size_t v = sigma - 1; v >= 1; --v) {
        t.flags_[v] = t.hot(2 * v) || t.hot(2 * v + 1);
    }
    return t;
}

bool KedTree::hot(std::size_t v) const {
    return v >= sigma_ ? counts_[v - sigma_] >= k_ : flags_[v] != 0;
}

bool KedTree::contains(std::size_t i, std::uint64_t x) const {
    return i >= 1 && i <= n_ && owner_[i - 1] == static_cast<std::int64_t>(x);
}

void KedTree::refresh_path(std::uint64_t x) {
    for (std::size_t v = (sigma_ + x) / 2; v >= 1; v /= 2) {
        flags_[v] = hot(2 * v) || hot(2 * v + 1);
        touched_ += 3;
    }
}

void KedTree::insert(std::size_t i, std::uint64_t x) {
    if (i < 1 || i > n_ || x >= sigma_) {
        throw std::invalid_argument("element outside [1, n] x [0, sigma)");
    }
    if (owner_[i - 1] >= 0) {
        throw std::invalid_argument("index " + std::to_string(i) + " is already present");
    }
    touched_ = 1 + 2 * count_width();
    owner_[i - 1] = static_cast<std::int64_t>(x);
    b_[x][i - 1] = true;
    ++counts_[x];
    ++size_;
    if (counts_[x] >= k_) {
        refresh_path(x);
    }
}

void KedTree::erase(std::size_t i, std::uint64_t x) {
    if (!contains(i, x)) {
        throw std::invalid_argument("element (" + std::to_string(i) + ", " + std::to_string(x) +
                                    ") is not present");
    }
    touched_ = 1 + 2 * count_width();
    const bool was_hot = counts_[x] >= k_;
    owner_[i - 1] = -1;
    b_[x][i - 1] = false;
    --counts_[x];
    --size_;
    if (was_hot && counts_[x] < k_) {
        refresh_path(x);
    }
}

BitString KedTree::encode() const {
    BitString out(encoding_width());
    for (std::size_t v = 1; v < sigma_; ++v) {
        out.set(v - 1, flags_[v] != 0);
    }
    for (std::size_t x = 0; x < sigma_; ++x) {
        const std::size_t base = sigma_ - 1 + x * block_width();
        for (std::size_t i = 0; i < n_; ++i) {
            out.set(base + i, b_[x][i]);
        }
        out.set_uint(base + n_, count_width(), counts_[x]);
    }
    return out;
}

// CpTree

CpTree::CpTree(std::size_t n, std::size_t d, Rational eps, std::int64_t L)
    : n_(n), d_(d), eps_(eps), L_(L) {
    require_power_of_two(n, "closest-pair index range n");
    if (d < 1) {
        throw std::invalid_argument("closest-pair tree needs d >= 1");
    }
    if (L < 1) {
        throw std::invalid_argument("closest-pair tree needs L >= 1");
    }
    if (eps.num <= 0 || eps.den <= 0) {
        throw std::invalid_argument("closest-pair tree needs eps > 0");
    }
    box_bits_ = width_for(grid_id(Point(d, L - 1), eps).coords[0]);
    if (box_bits_ * d > 22) {
        throw std::invalid_argument("hypergrid has more than 2^22 boxes");
    }
    leaves_ = std::size_t{1} << (box_bits_ * d);
    flags_.assign(leaves_, 0);
    points_.assign(n, {});
}

CpTree CpTree::from_set(std::size_t n, std::size_t d, Rational eps, std::int64_t L,
                        const std::vector<std::pair<std::size_t, Point>>& S) {
    CpTree t(n, d, eps, L);
    for (const auto& [i, p] : S) {
        if (i < 1 || i > n) {
            throw std::invalid_argument("point index outside [1, n]");
        }
        t.check_point(p);
        if (!t.points_[i - 1].empty()) {
            throw std::invalid_argument("index " + std::to_string(i) + " appears twice");
        }
        t.points_[i - 1] = p;
        t.leaf(t.box_of(p)).set.insert(i);
        ++t.size_;
    }
    for (auto& [x, lf] : t.occupied_) {
        if (lf.set.count() != 1) {
            continue;
        }
        const auto i = lf.set.select(1);
        for (const auto y : t.neighbour_leaves(x)) {
            const auto* other = t.find_leaf(y);
            if (other != nullptr && other->set.count() == 1 &&
                within_distance(t.points_[i - 1], t.points_[other->set.select(1) - 1], eps)) {
                ++lf.external;
            }
        }
    }
    for (std::size_t v = t.leaves_ - 1; v >= 1; --v) {
        t.flags_[v] = t.hot(2 * v) || t.hot(2 * v + 1);
    }
    t.touched_ = 0;
    return t;
}

void CpTree::check_point(const Point& p) const {
    if (p.size() != d_) {
        throw std::out_of_range("point has dimension " + std::to_string(p.size()) +
                                ", tree expects " + std::to_string(d_));
    }
    for (const auto c : p) {
        if (c < 0 || c >= L_) {
            throw std::out_of_range("point coordinate " + std::to_string(c) +
                                    " outside [0, " + std::to_string(L_) + ")");
        }
    }
}

std::uint64_t CpTree::box_of(const Point& p) const {
    check_point(p);
    std::uint64_t x = 0;
    for (const auto c : grid_id(p, eps_).coords) {
        x = (x << box_bits_) | c;
    }
    return x;
}

HypergridId CpTree::box_id(std::uint64_t x) const {
    HypergridId g;
    g.coords.assign(d_, 0);
    const std::uint64_t mask = (std::uint64_t{1} << box_bits_) - 1;
    for (std::size_t i = d_; i > 0; --i) {
        g.coords[i - 1] = x & mask;
        x >>= box_bits_;
    }
    return g;
}

std::vector<std::uint64_t> CpTree::neighbour_leaves(std::uint64_t x) const {
    std::vector<std::uint64_t> out;
    for (const auto& g : neighbours(box_id(x), std::uint64_t{1} << box_bits_)) {
        std::uint64_t y = 0;
        for (const auto c : g.coords) {
            y = (y << box_bits_) | c;
        }
        out.push_back(y);
    }
    return out;
}

CpTree::Leaf& CpTree::leaf(std::uint64_t x) {
    auto it = occupied_.find(x);
    if (it == occupied_.end()) {
        it = occupied_.emplace(x, Leaf{0, PrefixSumTree(n_)}).first;
    }
    return it->second;
}

const CpTree::Leaf* CpTree::find_leaf(std::uint64_t x) const {
    const auto it = occupied_.find(x);
    return it == occupied_.end() ? nullptr : &it->second;
}

std::size_t CpTree::set_size(std::uint64_t x) const {
    const auto* lf = find_leaf(x);
    return lf == nullptr ? 0 : lf->set.count();
}

std::size_t CpTree::external(std::uint64_t x) const {
    const auto* lf = find_leaf(x);
    return lf == nullptr ? 0 : lf->external;
}

std::size_t CpTree::only_member(std::uint64_t y) {
    touched_ += log2_floor(n_) * PrefixSumTree::label_width(n_) + 1;
    return find_leaf(y)->set.select(1);
}

bool CpTree::hot(std::size_t v) const {
    if (v < leaves_) {
        return flags_[v] != 0;
    }
    const auto* lf = find_leaf(v - leaves_);
    if (lf == nullptr) {
        return false;
    }
    const auto s = lf->set.count();
    return s >= 2 || (s == 1 && lf->external >= 1);
}

void CpTree::refresh_path(std::uint64_t x) {
    touched_ += 2 * (PrefixSumTree::label_width(n_) + external_width());
    for (std::size_t v = (leaves_ + x) / 2; v >= 1; v /= 2) {
        flags_[v] = hot(2 * v) || hot(2 * v + 1);
        touched_ += 3;
    }
}

bool CpTree::query() const { return leaves_ > 1 ? flags_[1] != 0 : hot(1); }

void CpTree::insert(std::size_t i, const Point& p) {
    if (i < 1 || i > n_) {
        throw std::invalid_argument("point index outside [1, n]");
    }
    const auto x = box_of(p);
    if (!points_[i - 1].empty()) {
        throw std::invalid_argument("index " + std::to_string(i) + " is already present");
    }
    const std::size_t pw = PrefixSumTree::label_width(n_);
    const std::size_t ew = external_width();
    touched_ = log2_floor(n_) * pw + 1;
    points_[i - 1] = p;
    ++size_;
    leaf(x).set.insert(i);
    const auto s = set_size(x);

    if (s == 1) {
        for (const auto y : neighbour_leaves(x)) {
            touched_ += pw;
            if (set_size(y) != 1) {
                continue;
            }
            const auto j = only_member(y);
            if (within_distance(p, points_[j - 1], eps_)) {
                ++leaf(x).external;
                auto& ly = leaf(y);
                ++ly.external;
                touched_ += 4 * ew;
                if (ly.external == 1) {
                    refresh_path(y);
                }
            }
        }
        if (external(x) >= 1) {
            refresh_path(x);
        }
    } else if (s == 2) {
        const auto& set = find_leaf(x)->set;
        const auto other = set.select(1) == i ? set.select(2) : set.select(1);
        touched_ += log2_floor(n_) * pw + 1;
        for (const auto y : neighbour_leaves(x)) {
            touched_ += pw;
            if (set_size(y) != 1) {
                continue;
            }
            const auto j = only_member(y);
            if (within_distance(points_[other - 1], points_[j - 1], eps_)) {
                auto& ly = leaf(y);
                --ly.external;
                touched_ += 2 * ew;
                if (ly.external == 0) {
                    refresh_path(y);
                }
            }
        }
        leaf(x).external = 0;
        touched_ += ew;
        refresh_path(x);
    }
}

void CpTree::erase(std::size_t i, const Point& p) {
    if (i < 1 || i > n_ || points_[i - 1].empty() || points_[i - 1] != p) {
        throw std::invalid_argument("point " + std::to_string(i) +
                                    " is not present at that position");
    }
    const auto x = box_of(p);
    const std::size_t pw = PrefixSumTree::label_width(n_);
    const std::size_t ew = external_width();
    touched_ = log2_floor(n_) * pw + 1;
    points_[i - 1].clear();
    --size_;
    leaf(x).set.erase(i);
    const auto s = set_size(x);

    if (s == 0) {
        for (const auto y : neighbour_leaves(x)) {
            touched_ += pw;
            if (set_size(y) != 1) {
                continue;
            }
            const auto j = only_member(y);
            if (within_distance(p, points_[j - 1], eps_)) {
                auto& ly = leaf(y);
                --ly.external;
                touched_ += 2 * ew;
                if (ly.external == 0) {
                    refresh_path(y);
                }
            }
        }
        occupied_.erase(x);
        touched_ += ew;
        refresh_path(x);
    } else if (s == 1) {
        const auto remaining = only_member(x);
        auto& lx = leaf(x);
        lx.external = 0;
        touched_ += ew;
        for (const auto y : neighbour_leaves(x)) {
            touched_ += pw;
            if (set_size(y) != 1) {
                continue;
            }
            const auto j = only_member(y);
            if (within_distance(points_[remaining - 1], points_[j - 1], eps_)) {
                ++leaf(x).external;
                auto& ly = leaf(y);
                ++ly.external;
                touched_ += 4 * ew;
                if (ly.external == 1) {
                    refresh_path(y);
                }
            }
        }
        refresh_path(x);
    }
}

BitString CpTree::encode() const {
    BitString out(encoding_width());
    for (std::size_t v = 1; v < leaves_; ++v) {
        out.set(v - 1, flags_[v] != 0);
    }
    for (const auto& [x, lf] : occupied_) {
        const std::size_t base = leaves_ - 1 + x * block_width();
        out.set_uint(base, external_width(), lf.external);
        lf.set.encode_into(out, base + external_width());
    }
    return out;
}

}  // namespace qramc
