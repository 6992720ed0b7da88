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

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "qramc/prefix_sum_tree.hpp"

namespace qramc {
namespace {

std::vector<std::size_t> subset(std::size_t leaves, std::uint64_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i <= leaves; ++i) {
        if (mask >> (i - 1) & 1U) {
            out.push_back(i);
        }
    }
    return out;
}

TEST(PrefixSumTree, EncodeExamples) {
    EXPECT_EQ(PrefixSumTree(4).encode().to_string(), "000" "000" "000" "0000");
    EXPECT_EQ(PrefixSumTree::from_set(4, {1, 3}).encode().to_string(), "010" "001" "001" "1010");
    const auto full = PrefixSumTree::from_set(4, {1, 2, 3, 4}).encode().to_string();
    EXPECT_EQ(full.substr(0, 3), "100");
    EXPECT_EQ(full.substr(9), "1111");
    EXPECT_EQ(PrefixSumTree::encoding_width(4), 13u);
    EXPECT_EQ(PrefixSumTree::encoding_width(1), 1u);
}

TEST(PrefixSumTree, EncodeDecodeBijection) {
    for (const std::size_t leaves : {1u, 2u, 4u, 8u}) {
        std::set<std::string> seen;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << leaves); ++mask) {
            const auto F = subset(leaves, mask);
            const auto tree = PrefixSumTree::from_set(leaves, F);
            const auto enc = tree.encode();
            EXPECT_EQ(enc.size(), PrefixSumTree::encoding_width(leaves));
            const auto back = PrefixSumTree::decode(enc);
            EXPECT_EQ(back.free_set(), F);
            EXPECT_EQ(back.count(), F.size());
            seen.insert(enc.to_string());
        }
        EXPECT_EQ(seen.size(), std::size_t{1} << leaves);
    }
}

TEST(PrefixSumTree, LabelsAreChildSums) {
    const auto t = PrefixSumTree::from_set(8, {2, 5, 7, 8});
    for (std::size_t v = 1; v < 8; ++v) {
        EXPECT_EQ(t.label(v), t.label(2 * v) + t.label(2 * v + 1));
    }
    EXPECT_EQ(t.label(1), 4u);
}

TEST(PrefixSumTree, DecodeRejectsInconsistentLabels) {
    auto enc = PrefixSumTree::from_set(4, {1, 3}).encode();
    enc.flip(2);  // root label 010 -> 011
    EXPECT_THROW(PrefixSumTree::decode(enc), EncodingError);
    EXPECT_THROW(PrefixSumTree::decode(BitString(5)), EncodingError);
}

TEST(PrefixSumTree, SelectExamples) {
    EXPECT_EQ(PrefixSumTree::from_set(8, {2, 5, 7}).select(2), 5u);
    EXPECT_EQ(PrefixSumTree::from_set(4, {1}).select(1), 1u);
    const auto full = PrefixSumTree::from_set(8, {1, 2, 3, 4, 5, 6, 7, 8});
    for (std::size_t k = 1; k <= 8; ++k) {
        EXPECT_EQ(full.select(k), k);
    }
    EXPECT_THROW(full.select(0), std::out_of_range);
    EXPECT_THROW(full.select(9), std::out_of_range);
}

TEST(PrefixSumTree, SelectMatchesSortedIndex) {
    for (std::uint64_t mask = 1; mask < 256; ++mask) {
        const auto F = subset(8, mask);
        const auto t = PrefixSumTree::from_set(8, F);
        for (std::size_t j = 1; j <= F.size(); ++j) {
            EXPECT_EQ(t.select(j), F[j - 1]);
            EXPECT_EQ(t.rank(F[j - 1]), j);
        }
    }
}

// Registers for standalone superposition tests: k in bits 0..4, j in 5..9.
constexpr Reg kK{0, 5};
constexpr Reg kJ{5, 5};

SparseState kj_state(std::uint64_t k, std::uint64_t j = 0) {
    BitString key(10);
    kK.write(key, k);
    kJ.write(key, j);
    return SparseState::basis(key);
}

TEST(SuperposeExact, Examples) {
    for (std::uint64_t k = 1; k <= 3; ++k) {
        auto s = kj_state(k);
        u_superpose_exact(s, kK, kJ);
        ASSERT_EQ(s.size(), k);
        for (const auto& [key, a] : s.entries()) {
            EXPECT_EQ(kK.read(key), k);
            const auto j = kJ.read(key);
            EXPECT_GE(j, 1u);
            EXPECT_LE(j, k);
            EXPECT_NEAR(a.real(), 1.0 / std::sqrt(static_cast<double>(k)), 1e-15);
            EXPECT_EQ(a.imag(), 0.0);
        }
    }
}

TEST(SuperposeExact, Errors) {
    auto zero = kj_state(0);
    EXPECT_THROW(u_superpose_exact(zero, kK, kJ), AllocatorError);
    auto dirty = kj_state(2, 1);
    EXPECT_THROW(u_superpose_exact(dirty, kK, kJ), AllocatorError);
}

TEST(SuperposeExact, ControlledLeavesInactiveBranches) {
    BitString on(11);
    kK.write(on, 3);
    on.set(10, true);
    BitString off(11);
    kK.write(off, 3);
    auto s = SparseState::from_entries(11, {{on, 0.6}, {off, 0.8}});
    u_superpose_exact(s, kK, kJ, {10});
    EXPECT_EQ(s.size(), 4u);
    EXPECT_NEAR(std::abs(s.amplitude(off)), 0.8, 1e-15);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
}

TEST(ApproxSuperpose, PlanRejectsBadEpsilon) {
    EXPECT_THROW(ApproxSuperpose::plan(4, 0.0), std::invalid_argument);
    EXPECT_THROW(ApproxSuperpose::plan(4, 0.5), std::invalid_argument);
    EXPECT_THROW(ApproxSuperpose::plan(0, 0.1), std::invalid_argument);
}

// Builds the matrix of the primitive on the inputs |k,0>, k = 1..m, minus
// the exact map, and returns its largest singular value.
double measured_distance(std::size_t m, double eps) {
    const auto plan = ApproxSuperpose::plan(m, eps);
    std::map<BitString, int> rows;
    std::vector<std::vector<std::pair<BitString, Amplitude>>> cols;
    for (std::size_t k = 1; k <= m; ++k) {
        auto approx = kj_state(k);
        u_superpose_approx(approx, kK, kJ, plan);
        auto exact = kj_state(k);
        u_superpose_exact(exact, kK, kJ);
        std::map<BitString, Amplitude> diff;
        for (const auto& [key, a] : approx.entries()) {
            diff[key] += a;
        }
        for (const auto& [key, a] : exact.entries()) {
            diff[key] -= a;
        }
        cols.emplace_back(diff.begin(), diff.end());
        for (const auto& [key, a] : diff) {
            rows.emplace(key, 0);
        }
    }
    int r = 0;
    for (auto& [key, idx] : rows) {
        idx = r++;
    }
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(r, static_cast<Eigen::Index>(m));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        for (const auto& [key, a] : cols[c]) {
            D(rows[key], static_cast<Eigen::Index>(c)) = a;
        }
    }
    if (r == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(D);
    return svd.singularValues()(0);
}

TEST(ApproxSuperpose, SpectralDistanceWithinEpsilon) {
    for (const std::size_t m : {2u, 4u, 8u, 16u}) {
        for (const double eps : {0.25, 0.1, 0.01}) {
            const double d = measured_distance(m, eps);
            EXPECT_LE(d, eps) << "m=" << m << " eps=" << eps;
        }
    }
}

TEST(ApproxSuperpose, KOneIsExact) {
    for (const double eps : {0.25, 0.1, 0.01}) {
        EXPECT_EQ(measured_distance(1, eps), 0.0);
    }
}

TEST(ApproxSuperpose, MatchesClosedForm) {
    const auto plan = ApproxSuperpose::plan(8, 0.1);
    for (std::size_t k = 1; k <= 8; ++k) {
        auto a = kj_state(k);
        u_superpose_approx(a, kK, kJ, plan);
        auto e = kj_state(k);
        u_superpose_exact(e, kK, kJ);
        EXPECT_NEAR(distance(a, e), plan.distance(k), 1e-12);
        EXPECT_NEAR(std::norm(a.amplitude([&] {
                        BitString key(10);
                        kK.write(key, k);
                        kJ.write(key, 9);
                        return key;
                    }())),
                    plan.remainder(k), 1e-12);
    }
}

TEST(ApproxSuperpose, GateCountSmallCase) {
    // m=2, eps=1/4: log2(m/eps) = 3.
    const auto plan = ApproxSuperpose::plan(2, 0.25);
    EXPECT_LE(plan.gate_count(), 5u * 3u);
    EXPECT_EQ(plan.K, 32u);
}

TEST(ApproxSuperpose, GateCountGrowsWithLogMOverEps) {
    std::vector<double> x;
    std::vector<double> y;
    for (const std::size_t m : {2u, 4u, 8u, 16u}) {
        for (const double eps : {0.25, 0.1, 0.01}) {
            x.push_back(std::log2(static_cast<double>(m) / eps));
            y.push_back(static_cast<double>(ApproxSuperpose::plan(m, eps).gate_count()));
        }
    }
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double a = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double b = (sy - a * sx) / n;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ss_res += std::pow(y[i] - (a * x[i] + b), 2);
        ss_tot += std::pow(y[i] - sy / n, 2);
    }
    EXPECT_GT(a, 0.0);
    EXPECT_GE(1.0 - ss_res / ss_tot, 0.9);
}

// Allocator region for leaves = 4: encoding 13 bits, index 3 bits, rank 3 bits.
AllocRegisters regs4() {
    AllocRegisters r;
    r.leaves = 4;
    r.encoding = 0;
    r.index = 13;
    r.rank = 16;
    return r;
}

SparseState alloc_state(const AllocRegisters& r, const std::vector<std::size_t>& F,
                        std::uint64_t index = 0) {
    BitString key(r.rank + AllocRegisters::rank_width(r.leaves));
    PrefixSumTree::from_set(r.leaves, F).encode_into(key, r.encoding);
    r.index_reg().write(key, index);
    return SparseState::basis(key);
}

TEST(Alloc, Singleton) {
    const auto r = regs4();
    auto s = alloc_state(r, {3});
    AllocStats st;
    u_alloc(s, r, SuperposeConfig::exact(), st);
    const auto want = alloc_state(r, {}, 3);
    EXPECT_NEAR(fidelity(s, want), 1.0, 1e-12);
    EXPECT_EQ(st.superpose_uses, 1u);
}

TEST(Alloc, TwoFree) {
    const auto r = regs4();
    auto s = alloc_state(r, {1, 2});
    AllocStats st;
    u_alloc(s, r, SuperposeConfig::exact(), st);
    const double h = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(s.amplitude(alloc_state(r, {2}, 1).entries()[0].first) - h), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.amplitude(alloc_state(r, {1}, 2).entries()[0].first) - h), 0.0, 1e-12);
    EXPECT_EQ(s.size(), 2u);
}

TEST(Alloc, ExhaustiveUniformAndInverse) {
    const auto r = regs4();
    for (std::uint64_t mask = 1; mask < 16; ++mask) {
        const auto F = subset(4, mask);
        const auto input = alloc_state(r, F);
        auto s = input;
        AllocStats st;
        u_alloc(s, r, SuperposeConfig::exact(), st);
        ASSERT_EQ(s.size(), F.size());
        for (const auto i : F) {
            auto rest = F;
            rest.erase(std::find(rest.begin(), rest.end(), i));
            const auto key = alloc_state(r, rest, i).entries()[0].first;
            EXPECT_NEAR(std::abs(s.amplitude(key) - 1.0 / std::sqrt(static_cast<double>(F.size()))),
                        0.0, 1e-12);
        }
        for (const auto& [key, a] : s.entries()) {
            EXPECT_TRUE(r.rank_reg().is_zero(key));
        }
        u_free(s, r, SuperposeConfig::exact(), st);
        EXPECT_GE(fidelity(s, input), 1.0 - 1e-12);
        EXPECT_EQ(s.size(), 1u);
    }
}

TEST(Alloc, RejectsBadInput) {
    const auto r = regs4();
    AllocStats st;
    auto empty = alloc_state(r, {});
    EXPECT_THROW(u_alloc(empty, r, SuperposeConfig::exact(), st), AllocatorError);
    auto dirty = alloc_state(r, {1}, 2);
    EXPECT_THROW(u_alloc(dirty, r, SuperposeConfig::exact(), st), AllocatorError);
    auto not_allocated = alloc_state(r, {1}, 1);
    EXPECT_THROW(u_free(not_allocated, r, SuperposeConfig::exact(), st), AllocatorError);
}

TEST(Alloc, ApproxTracksRemainder) {
    const auto r = regs4();
    const auto cfg = SuperposeConfig::approximate(4, 0.1);
    auto s = alloc_state(r, {1, 2, 4});
    AllocStats st;
    u_alloc(s, r, cfg, st);
    const double rho = cfg.approx.remainder(3);
    EXPECT_NEAR(st.remainder_mass, rho, 1e-12);
    EXPECT_NEAR(s.norm_squared() + st.remainder_mass, 1.0, 1e-12);
    for (const auto& [key, a] : s.entries()) {
        EXPECT_TRUE(r.rank_reg().is_zero(key));
    }
    u_free(s, r, cfg, st);
    EXPECT_NEAR(s.norm_squared() + st.remainder_mass, 1.0, 1e-12);
    EXPECT_GE(fidelity(s, alloc_state(r, {1, 2, 4})), 1.0 - 4 * rho);
}

}  // namespace
}  // namespace qramc
