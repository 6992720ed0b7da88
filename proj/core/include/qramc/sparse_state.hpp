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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "qramc/bits.hpp"

namespace qramc {

using Amplitude = std::complex<double>;

/// A contiguous register of qubits inside a state; read as a big-endian
/// unsigned integer.
struct Reg {
    std::size_t offset = 0;
    std::size_t width = 0;

    std::uint64_t read(const BitString& key) const { return key.get_uint(offset, width); }
    void write(BitString& key, std::uint64_t v) const { key.set_uint(offset, width, v); }
    bool is_zero(const BitString& key) const { return key.range_is_zero(offset, width); }
};

/// Control qubits: an operation acts only on branches where all are 1.
using Controls = std::vector<std::size_t>;

inline bool controls_active(const BitString& key, const Controls& controls) {
    for (const auto c : controls) {
        if (!key.get(c)) {
            return false;
        }
    }
    return true;
}

/// Amplitudes with magnitude below this are dropped after every operation.
inline constexpr double kPruneThreshold = 1e-14;

/// A state over `num_qubits` qubits stored as a sorted list of
/// (basis string, amplitude) pairs with no duplicates and no zero entries.
///
/// The sorted representation makes every reduction run in a fixed order, so
/// identical operation sequences give bit-identical amplitudes.
class SparseState {
  public:
    using Entry = std::pair<BitString, Amplitude>;

    SparseState() = default;
    /// |0...0> on `num_qubits` qubits.
    explicit SparseState(std::size_t num_qubits);

    static SparseState basis(const BitString& key);
    /// Builds a state from arbitrary entries (merged, pruned, not normalized).
    static SparseState from_entries(std::size_t num_qubits, std::vector<Entry> entries);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }

    Amplitude amplitude(const BitString& key) const;
    double norm_squared() const;

    /// Applies a linear map given per basis entry. `emit(key, amp)` may be called
    /// any number of times for each input; results are merged and pruned.
    using Emit = std::function<void(const BitString&, Amplitude)>;
    void transform(const std::function<void(const BitString&, Amplitude, const Emit&)>& fn);

    /// Applies a basis permutation. `fn` rewrites the key in place. Throws
    /// std::logic_error if two entries land on the same key, which would mean
    /// the supplied map is not injective.
    void permute(const std::function<void(BitString&)>& fn);

    /// Keeps only entries satisfying `keep`; returns the squared norm removed.
    double project(const std::function<bool(const BitString&)>& keep);

    /// Scales every amplitude (used for subnormalized bookkeeping in tests).
    void scale(Amplitude factor);

  private:
    void canonicalize(std::vector<Entry>& raw);

    std::size_t num_qubits_ = 0;
    std::vector<Entry> entries_;
};

/// <a|b>.
Amplitude inner_product(const SparseState& a, const SparseState& b);
/// |<a|b>|^2.
double fidelity(const SparseState& a, const SparseState& b);
/// || a - b ||.
double distance(const SparseState& a, const SparseState& b);

}  // namespace qramc
