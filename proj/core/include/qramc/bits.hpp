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

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qramc {

/// Number of bits needed to write every value in [0, n].
constexpr std::size_t width_for(std::uint64_t n) {
    return n == 0 ? 1 : static_cast<std::size_t>(std::bit_width(n));
}

constexpr bool is_power_of_two(std::uint64_t n) { return std::has_single_bit(n); }

/// floor(log2(n)) for n >= 1; exact log2 when n is a power of two.
constexpr std::size_t log2_floor(std::uint64_t n) {
    return static_cast<std::size_t>(std::bit_width(n)) - 1;
}

/// ceil(log2(n)) for n >= 1.
constexpr std::size_t log2_ceil(std::uint64_t n) {
    return n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n - 1));
}

/// A fixed-length bit string. Position 0 is the leftmost character of the
/// written form and the most significant bit of any unsigned field read from
/// it, so lexicographic order on strings equals the ordering used here.
class BitString {
  public:
    BitString() = default;
    explicit BitString(std::size_t size);

    /// Parses a string over {'0','1'}; throws std::invalid_argument otherwise.
    static BitString from_string(std::string_view text);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool get(std::size_t pos) const {
        return (words_[pos >> 6] >> (63 - (pos & 63))) & 1U;
    }
    void set(std::size_t pos, bool value) {
        const std::uint64_t mask = std::uint64_t{1} << (63 - (pos & 63));
        if (value) {
            words_[pos >> 6] |= mask;
        } else {
            words_[pos >> 6] &= ~mask;
        }
    }
    void flip(std::size_t pos) { words_[pos >> 6] ^= std::uint64_t{1} << (63 - (pos & 63)); }

    /// Unsigned big-endian field of `width` (<= 64) bits starting at `offset`.
    std::uint64_t get_uint(std::size_t offset, std::size_t width) const;
    void set_uint(std::size_t offset, std::size_t width, std::uint64_t value);
    void xor_uint(std::size_t offset, std::size_t width, std::uint64_t value) {
        set_uint(offset, width, get_uint(offset, width) ^ value);
    }

    /// Copies `width` bits from `src` at `src_offset` into this at `offset`.
    void copy_bits(std::size_t offset, const BitString& src, std::size_t src_offset,
                   std::size_t width);
    /// XORs `width` bits of `src` (from `src_offset`) into this at `offset`.
    void xor_bits(std::size_t offset, const BitString& src, std::size_t src_offset,
                  std::size_t width);
    /// Exchanges two non-overlapping ranges of equal width.
    void swap_ranges(std::size_t a, std::size_t b, std::size_t width);

    BitString slice(std::size_t offset, std::size_t width) const;
    bool range_is_zero(std::size_t offset, std::size_t width) const;
    std::size_t popcount() const;
    std::size_t popcount(std::size_t offset, std::size_t width) const;

    std::string to_string() const;
    std::size_t hash() const;

    friend bool operator==(const BitString& a, const BitString& b) = default;
    friend std::strong_ordering operator<=>(const BitString& a, const BitString& b);

  private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// A bit string that does not decode to a valid structure.
class EncodingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct BitStringHash {
    std::size_t operator()(const BitString& b) const { return b.hash(); }
};

}  // namespace qramc
