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

// Dense state-vector reference used only by tests. Basis index bit
// (S-1-q) holds qubit q, so the index written in binary reads qubit 0 first.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qramc::testing {

class DenseState {
  public:
    using C = std::complex<double>;

    explicit DenseState(std::size_t qubits) : n_(qubits), amp_(std::size_t{1} << qubits) {
        amp_[0] = 1.0;
    }

    std::size_t qubits() const { return n_; }
    const std::vector<C>& amps() const { return amp_; }
    std::vector<C>& amps() { return amp_; }

    std::uint64_t mask(std::size_t q) const { return std::uint64_t{1} << (n_ - 1 - q); }
    bool bit(std::uint64_t idx, std::size_t q) const { return (idx & mask(q)) != 0; }

    void apply_1q(const C u[4], std::size_t q) {
        const auto mk = mask(q);
        for (std::uint64_t i = 0; i < amp_.size(); ++i) {
            if (i & mk) {
                continue;
            }
            const C a0 = amp_[i];
            const C a1 = amp_[i | mk];
            amp_[i] = u[0] * a0 + u[1] * a1;
            amp_[i | mk] = u[2] * a0 + u[3] * a1;
        }
    }

    template <class F>
    void apply_perm(F f) {
        std::vector<C> out(amp_.size());
        for (std::uint64_t i = 0; i < amp_.size(); ++i) {
            out[f(i)] += amp_[i];
        }
        amp_ = std::move(out);
    }

    std::string basis_string(std::uint64_t idx) const {
        std::string s(n_, '0');
        for (std::size_t q = 0; q < n_; ++q) {
            if (bit(idx, q)) {
                s[q] = '1';
            }
        }
        return s;
    }

  private:
    std::size_t n_;
    std::vector<C> amp_;
};

}  // namespace qramc::testing
