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

#include "qramc/simulator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dense_state.hpp"

namespace qramc {
namespace {

using testing::DenseState;

BitString bs(const char* s) { return BitString::from_string(s); }

SparseState state_of(std::size_t n, std::vector<std::pair<const char*, Amplitude>> terms) {
    std::vector<SparseState::Entry> e;
    for (auto& [k, a] : terms) {
        e.emplace_back(bs(k), a);
    }
    return SparseState::from_entries(n, e);
}

void expect_state(const SparseState& got, const SparseState& want, double tol = 1e-12) {
    EXPECT_LT(distance(got, want), tol);
    EXPECT_EQ(got.size(), want.size());
}

constexpr double kR = 0.70710678118654752440;

TEST(ApplyGate, Examples) {
    SparseState s(2);
    apply_gate(s, {GateKind::H, {0}, {}});
    expect_state(s, state_of(2, {{"00", kR}, {"10", kR}}));

    SparseState x(2);
    apply_gate(x, {GateKind::X, {1}, {}});
    expect_state(x, state_of(2, {{"01", 1.0}}));

    apply_gate(s, {GateKind::CNOT, {0, 1}, {}});
    expect_state(s, state_of(2, {{"00", kR}, {"11", kR}}));
}

TEST(ApplyGate, OutOfRange) {
    SparseState s(2);
    EXPECT_THROW(apply_gate(s, {GateKind::H, {2}, {}}), std::out_of_range);
    EXPECT_THROW(apply_gate(s, {GateKind::CNOT, {0, 5}, {}}), std::out_of_range);
}

TEST(ApplyGate, HadamardTwiceLeavesNoDust) {
    SparseState s(1);
    apply_gate(s, {GateKind::H, {0}, {}});
    apply_gate(s, {GateKind::H, {0}, {}});
    EXPECT_EQ(s.size(), 1u);
    EXPECT_NEAR(std::abs(s.amplitude(bs("0"))), 1.0, 1e-15);
}

QramCircuit rag_circuit(std::size_t W, std::size_t M, std::vector<Instruction> ins = {}) {
    QramCircuit c;
    c.n = 1;
    c.W = W;
    c.M = M;
    c.m = M;
    c.instructions = std::move(ins);
    return c;
}

TEST(ApplyRag, SwapsSelectedMemoryBit) {
    // M=4: address qubits 0-1, swap bit 2, memory 3..6.
    const auto c = rag_circuit(3, 4);
    auto s = SparseState::basis(bs("011" "0000"));
    apply_rag(s, c);
    expect_state(s, state_of(7, {{"010" "0100", 1.0}}));
}

TEST(ApplyRag, IdentityWhenBothZero) {
    const auto c = rag_circuit(3, 4);
    auto s = SparseState::basis(bs("100" "0000"));
    apply_rag(s, c);
    expect_state(s, state_of(7, {{"100" "0000", 1.0}}));
}

TEST(ApplyRag, Involution) {
    const auto c = rag_circuit(4, 4);
    auto s = state_of(8, {{"0110" "0010", 0.6}, {"1011" "1000", Amplitude(0.0, 0.8)}});
    const auto before = s;
    apply_rag(s, c);
    EXPECT_GT(distance(s, before), 0.5);
    apply_rag(s, c);
    expect_state(s, before);
}

TEST(ApplyRead, Examples) {
    const auto input = bs("10");
    const Read r{{0}, 1};
    auto s = SparseState::basis(bs("00"));
    apply_read(s, r, input);
    expect_state(s, state_of(2, {{"01", 1.0}}));

    auto t = SparseState::basis(bs("10"));
    apply_read(t, r, input);
    expect_state(t, state_of(2, {{"10", 1.0}}));

    apply_read(s, r, input);
    expect_state(s, state_of(2, {{"00", 1.0}}));
}

TEST(ApplyRead, AddressBeyondInput) {
    auto s = SparseState::basis(bs("110"));
    EXPECT_THROW(apply_read(s, Read{{0, 1}, 2}, bs("101")), std::out_of_range);
}

TEST(Run, EmptyCircuit) {
    const auto c = rag_circuit(3, 4);
    const auto r = run(c, bs("0"));
    expect_state(r.state, SparseState(7));
    EXPECT_EQ(r.report.max_weight, 0u);
    EXPECT_EQ(r.report.max_weight_per_step, std::vector<std::size_t>{0});
}

TEST(Run, RagWritesAddressThree) {
    // Trace: |000 0000> -X0-> |100..> -X1-> |110..> -X2-> |111..> -RAG-> |110 0001>.
    const auto c = rag_circuit(3, 4,
                               {ApplyGate{{GateKind::X, {0}, {}}}, ApplyGate{{GateKind::X, {1}, {}}},
                                ApplyGate{{GateKind::X, {2}, {}}}, Rag{}});
    const auto r = run(c, bs("0"));
    expect_state(r.state, state_of(7, {{"110" "0001", 1.0}}));
    EXPECT_EQ(r.report.max_weight, 1u);
    EXPECT_EQ(r.report.max_weight_per_step, (std::vector<std::size_t>{0, 0, 0, 0, 1}));
}

TEST(Run, SuperposedSwapBit) {
    // Branches: swap bit 0 writes nothing, swap bit 1 writes memory[0].
    const auto c = rag_circuit(3, 4, {ApplyGate{{GateKind::H, {2}, {}}}, Rag{}});
    const auto r = run(c, bs("0"));
    expect_state(r.state, state_of(7, {{"000" "0000", kR}, {"000" "1000", kR}}));
    EXPECT_EQ(r.report.max_weight, 1u);
    EXPECT_FALSE(r.report.exceeded);
}

TEST(Run, EnforceSparsity) {
    // Two writes with declared m=1.
    QramCircuit c = rag_circuit(3, 4,
                                {ApplyGate{{GateKind::X, {2}, {}}}, Rag{}, ApplyGate{{GateKind::X, {0}, {}}},
                                 ApplyGate{{GateKind::X, {2}, {}}}, Rag{}});
    c.m = 1;
    const auto monitored = run(c, bs("0"), SparsityMode::kMonitor);
    EXPECT_TRUE(monitored.report.exceeded);
    EXPECT_EQ(monitored.report.first_violation, 5);
    EXPECT_EQ(monitored.report.max_weight, 2u);
    try {
        run(c, bs("0"), SparsityMode::kEnforce);
        FAIL();
    } catch (const SparsityViolation& e) {
        EXPECT_EQ(e.step(), 5u);
        EXPECT_EQ(e.weight(), 2u);
    }
}

TEST(Run, InputLengthMismatch) {
    EXPECT_THROW(run(rag_circuit(3, 4), bs("01")), std::invalid_argument);
}

TEST(MeasureDistribution, Examples) {
    const auto bell = state_of(2, {{"00", kR}, {"11", kR}});
    auto d = measure_distribution(bell, {0});
    ASSERT_EQ(d.size(), 2u);
    EXPECT_NEAR(d[bs("0")], 0.5, 1e-12);
    EXPECT_NEAR(d[bs("1")], 0.5, 1e-12);

    d = measure_distribution(SparseState::basis(bs("01")), {1});
    ASSERT_EQ(d.size(), 1u);
    EXPECT_NEAR(d[bs("1")], 1.0, 1e-12);

    const auto plus = state_of(2, {{"00", 0.5}, {"01", 0.5}, {"10", 0.5}, {"11", 0.5}});
    d = measure_distribution(plus, {0, 1});
    ASSERT_EQ(d.size(), 4u);
    for (const auto& [k, p] : d) {
        EXPECT_NEAR(p, 0.25, 1e-12);
    }
}

TEST(MeasureDistribution, PositionOrderMatters) {
    const auto d = measure_distribution(SparseState::basis(bs("100")), {2, 0});
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.begin()->first, bs("01"));
}

TEST(TotalVariation, Basic) {
    OutcomeDistribution a{{bs("0"), 0.5}, {bs("1"), 0.5}};
    OutcomeDistribution b{{bs("0"), 1.0}};
    EXPECT_NEAR(total_variation(a, b), 0.5, 1e-15);
    EXPECT_NEAR(total_variation(a, a), 0.0, 1e-15);
}

// Reference gate matrices written out independently of the library.
void dense_apply(DenseState& d, const GateSpec& g) {
    using C = std::complex<double>;
    const C i(0, 1);
    const double r = 1 / std::sqrt(2.0);
    const auto q = static_cast<std::size_t>(g.targets[0]);
    switch (g.kind) {
        case GateKind::CNOT: {
            const auto t = static_cast<std::size_t>(g.targets[1]);
            d.apply_perm([&](std::uint64_t x) { return d.bit(x, q) ? x ^ d.mask(t) : x; });
            return;
        }
        case GateKind::H: {
            const C u[4] = {r, r, r, -r};
            d.apply_1q(u, q);
            return;
        }
        case GateKind::X: {
            const C u[4] = {0, 1, 1, 0};
            d.apply_1q(u, q);
            return;
        }
        case GateKind::Y: {
            const C u[4] = {0, -i, i, 0};
            d.apply_1q(u, q);
            return;
        }
        case GateKind::Z: {
            const C u[4] = {1, 0, 0, -1};
            d.apply_1q(u, q);
            return;
        }
        case GateKind::S: {
            const C u[4] = {1, 0, 0, i};
            d.apply_1q(u, q);
            return;
        }
        case GateKind::Sdg: {
            const C u[4] = {1, 0, 0, -i};
            d.apply_1q(u, q);
            return;
        }
        case GateKind::T: {
            const C u[4] = {1, 0, 0, std::exp(i * (std::numbers::pi / 4))};
            d.apply_1q(u, q);
            return;
        }
        case GateKind::Tdg: {
            const C u[4] = {1, 0, 0, std::exp(-i * (std::numbers::pi / 4))};
            d.apply_1q(u, q);
            return;
        }
        case GateKind::U3: {
            const double th = g.angles[0], ph = g.angles[1], la = g.angles[2];
            const C u[4] = {std::cos(th / 2), -std::exp(i * la) * std::sin(th / 2),
                            std::exp(i * ph) * std::sin(th / 2),
                            std::exp(i * (ph + la)) * std::cos(th / 2)};
            d.apply_1q(u, q);
            return;
        }
    }
}

TEST(Run, AgreesWithDenseReference) {
    std::mt19937_64 rng(20261014);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t W = 4;
        const std::size_t M = 4;
        QramCircuit c = rag_circuit(W, M);
        c.n = 4;
        const auto input = BitString::from_string(trial % 2 ? "1011" : "0110");
        std::uniform_int_distribution<int> kind(0, 11);
        std::uniform_int_distribution<int> qubit(0, static_cast<int>(W) - 1);
        std::uniform_real_distribution<double> angle(-3.0, 3.0);
        for (int t = 0; t < 25; ++t) {
            const int k = kind(rng);
            if (k == 10) {
                c.instructions.push_back(Rag{});
            } else if (k == 11) {
                c.instructions.push_back(Read{{0, 1}, 3});
            } else {
                GateSpec g{static_cast<GateKind>(k % 10), {qubit(rng)}, {}};
                if (g.kind == GateKind::CNOT) {
                    int t2 = qubit(rng);
                    while (t2 == g.targets[0]) {
                        t2 = qubit(rng);
                    }
                    g.targets.push_back(t2);
                }
                if (g.kind == GateKind::U3) {
                    g.angles = {angle(rng), angle(rng), angle(rng)};
                }
                c.instructions.push_back(ApplyGate{g});
            }
        }
        ASSERT_TRUE(validate_qram(c).empty());

        DenseState d(W + M);
        for (const auto& ins : c.instructions) {
            if (const auto* g = std::get_if<ApplyGate>(&ins)) {
                dense_apply(d, g->gate);
            } else if (std::holds_alternative<Read>(ins)) {
                d.apply_perm([&](std::uint64_t x) {
                    const std::size_t y = (d.bit(x, 0) ? 2 : 0) + (d.bit(x, 1) ? 1 : 0);
                    return input.get(y) ? x ^ d.mask(3) : x;
                });
            } else {
                d.apply_perm([&](std::uint64_t x) {
                    const std::size_t i = (d.bit(x, 0) ? 2 : 0) + (d.bit(x, 1) ? 1 : 0);
                    const std::size_t mem = W + i;
                    if (d.bit(x, 2) != d.bit(x, mem)) {
                        x ^= d.mask(2) | d.mask(mem);
                    }
                    return x;
                });
            }
        }
        const auto r = run(c, input, SparsityMode::kOff);
        EXPECT_NEAR(r.state.norm_squared(), 1.0, 1e-9);
        for (std::uint64_t x = 0; x < d.amps().size(); ++x) {
            const auto key = BitString::from_string(d.basis_string(x));
            EXPECT_LT(std::abs(r.state.amplitude(key) - d.amps()[x]), 1e-10)
                << "trial " << trial << " basis " << d.basis_string(x);
        }
    }
}

TEST(Run, Deterministic) {
    QramCircuit c = rag_circuit(4, 4);
    for (int q = 0; q < 4; ++q) {
        c.instructions.push_back(ApplyGate{{GateKind::U3, {q}, {0.3 * q + 0.1, 0.7, -0.2}}});
    }
    c.instructions.push_back(Rag{});
    c.instructions.push_back(ApplyGate{{GateKind::CNOT, {2, 0}, {}}});
    c.instructions.push_back(Rag{});
    const auto a = run(c, bs("0"));
    const auto b = run(c, bs("0"));
    ASSERT_EQ(a.state.entries().size(), b.state.entries().size());
    for (std::size_t i = 0; i < a.state.entries().size(); ++i) {
        EXPECT_EQ(a.state.entries()[i].first, b.state.entries()[i].first);
        EXPECT_EQ(a.state.entries()[i].second, b.state.entries()[i].second);
    }
    EXPECT_EQ(measure_distribution(a.state, {0, 1, 2, 3}), measure_distribution(b.state, {0, 1, 2, 3}));
}

TEST(SparseState, PermuteRejectsCollisions) {
    auto s = state_of(2, {{"00", kR}, {"01", kR}});
    EXPECT_THROW(s.permute([](BitString& k) { k.set(1, false); }), std::logic_error);
}

}  // namespace
}  // namespace qramc
