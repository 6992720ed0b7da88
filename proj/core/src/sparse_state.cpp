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

#include "qramc/sparse_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qramc {

SparseState::SparseState(std::size_t num_qubits) : num_qubits_(num_qubits) {
    entries_.emplace_back(BitString(num_qubits), Amplitude{1.0, 0.0});
}

SparseState SparseState::basis(const BitString& key) {
    SparseState s;
    s.num_qubits_ = key.size();
    s.entries_.emplace_back(key, Amplitude{1.0, 0.0});
    return s;
}

SparseState SparseState::from_entries(std::size_t num_qubits, std::vector<Entry> entries) {
    SparseState s;
    s.num_qubits_ = num_qubits;
    for (const auto& [k, a] : entries) {
        if (k.size() != num_qubits) {
            throw std::invalid_argument("basis string length does not match qubit count");
        }
    }
    s.canonicalize(entries);
    return s;
}

void SparseState::canonicalize(std::vector<Entry>& raw) {
    std::stable_sort(raw.begin(), raw.end(),
                     [](const Entry& a, const Entry& b) { return a.first < b.first; });
    entries_.clear();
    entries_.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size();) {
        Amplitude sum = raw[i].second;
        std::size_t j = i + 1;
        while (j < raw.size() && raw[j].first == raw[i].first) {
            sum += raw[j].second;
            ++j;
        }
        if (std::abs(sum) >= kPruneThreshold) {
            entries_.emplace_back(std::move(raw[i].first), sum);
        }
        i = j;
    }
}

Amplitude SparseState::amplitude(const BitString& key) const {
    const auto it = std::lower_bound(
        entries_.begin(), entries_.end(), key,
        [](const Entry& e, const BitString& k) { return e.first < k; });
    if (it != entries_.end() && it->first == key) {
        return it->second;
    }
    return {0.0, 0.0};
}

double SparseState::norm_squared() const {
    double total = 0.0;
    for (const auto& [k, a] : entries_) {
        total += std::norm(a);
    }
    return total;
}

void SparseState::transform(
    const std::function<void(const BitString&, Amplitude, const Emit&)>& fn) {
    std::vector<Entry> raw;
    raw.reserve(entries_.size() * 2);
    const Emit emit = [&raw](const BitString& k, Amplitude a) { raw.emplace_back(k, a); };
    for (const auto& [k, a] : entries_) {
        fn(k, a, emit);
    }
    canonicalize(raw);
}

void SparseState::permute(const std::function<void(BitString&)>& fn) {
    std::vector<Entry> raw = entries_;
    for (auto& [k, a] : raw) {
        fn(k);
    }
    std::stable_sort(raw.begin(), raw.end(),
                     [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < raw.size(); ++i) {
        if (raw[i].first == raw[i - 1].first) {
            throw std::logic_error("basis map is not injective on the supported states");
        }
    }
    entries_ = std::move(raw);
}

double SparseState::project(const std::function<bool(const BitString&)>& keep) {
    double removed = 0.0;
    std::vector<Entry> kept;
    kept.reserve(entries_.size());
    for (auto& e : entries_) {
        if (keep(e.first)) {
            kept.push_back(std::move(e));
        } else {
            removed += std::norm(e.second);
        }
    }
    entries_ = std::move(kept);
    return removed;
}

void SparseState::scale(Amplitude factor) {
    for (auto& [k, a] : entries_) {
        a *= factor;
    }
}

Amplitude inner_product(const SparseState& a, const SparseState& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("inner product of states with different qubit counts");
    }
    Amplitude total{0.0, 0.0};
    auto ia = a.entries().begin();
    auto ib = b.entries().begin();
    while (ia != a.entries().end() && ib != b.entries().end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            total += std::conj(ia->second) * ib->second;
            ++ia;
            ++ib;
        }
    }
    return total;
}

double fidelity(const SparseState& a, const SparseState& b) { return std::norm(inner_product(a, b)); }

double distance(const SparseState& a, const SparseState& b) {
    const double d2 = a.norm_squared() + b.norm_squared() - 2.0 * inner_product(a, b).real();
    return std::sqrt(std::max(0.0, d2));
}

}  // namespace qramc
