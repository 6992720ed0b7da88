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

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "qramc/app_trees.hpp"
#include "qramc/compressor.hpp"
#include "qramc/layout.hpp"
#include "qramc/qradix.hpp"
#include "qramc/simulator.hpp"

namespace qramc {
namespace {

BitString word(std::uint64_t x, std::size_t ell) {
    BitString b(ell);
    b.set_uint(0, ell, x);
    return b;
}

void BM_DirectRun(benchmark::State& state) {
    const auto T = static_cast<std::size_t>(state.range(0));
    const auto c = random_sparse_circuit(7, 6, 8, 2, T);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run(c, word(1, 2), SparsityMode::kMonitor));
    }
}
BENCHMARK(BM_DirectRun)->Arg(10)->Arg(30)->Arg(100);

void BM_CompressRun(benchmark::State& state) {
    const auto T = static_cast<std::size_t>(state.range(0));
    const auto c = random_sparse_circuit(7, 6, 8, 2, T);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compress_run(c, word(1, 2), CompressionOptions::exact()));
    }
}
BENCHMARK(BM_CompressRun)->Arg(10)->Arg(30)->Arg(100);

void BM_Swap(benchmark::State& state) {
    const auto ell = static_cast<std::size_t>(state.range(0));
    const auto m = static_cast<std::size_t>(state.range(1));
    const auto L = CompressedLayout::make(ell + 1, std::size_t{1} << ell, m);
    std::vector<BitString> S;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        S.push_back(word(2 * i + 1, ell));
    }
    BitString key(L.total());
    key.set_uint(0, ell, 2);
    key.set(ell, true);
    const auto start = prepare_canonical(S, L.qrt, key);
    for (auto _ : state) {
        auto s = start;
        QrtStats st;
        u_swap(s, L.address(), L.qrt, L.swap_qubit(), SuperposeConfig::exact(), st);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_Swap)->Args({3, 2})->Args({4, 4})->Args({8, 4});

void BM_KedInsert(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::vector<std::uint64_t> labels(n);
    for (auto& x : labels) {
        x = rng() % 64;
    }
    for (auto _ : state) {
        KedTree t(n, 2, 64);
        for (std::size_t i = 0; i < n; ++i) {
            t.insert(i + 1, labels[i]);
        }
        benchmark::DoNotOptimize(t.query());
    }
}
BENCHMARK(BM_KedInsert)->Arg(64)->Arg(1024);

void BM_CpInsert(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(2);
    std::vector<Point> pts(n, Point(2));
    for (auto& p : pts) {
        p = {static_cast<std::int64_t>(rng() % 1024), static_cast<std::int64_t>(rng() % 1024)};
    }
    for (auto _ : state) {
        CpTree t(n, 2, Rational{3, 1}, 1024);
        for (std::size_t i = 0; i < n; ++i) {
            t.insert(i + 1, pts[i]);
        }
        benchmark::DoNotOptimize(t.query());
    }
}
BENCHMARK(BM_CpInsert)->Arg(64)->Arg(1024);

}  // namespace
}  // namespace qramc

BENCHMARK_MAIN();
