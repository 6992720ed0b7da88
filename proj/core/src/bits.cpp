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

#include "qramc/bits.hpp"

#include <stdexcept>

namespace qramc {

BitString::BitString(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

BitString BitString::from_string(std::string_view text) {
    BitString out(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1') {
            out.set(i, true);
        } else if (text[i] != '0') {
            throw std::invalid_argument("bit string may only contain '0' and '1': " +
                                        std::string(text));
        }
    }
    return out;
}

std::uint64_t BitString::get_uint(std::size_t offset, std::size_t width) const {
    std::uint64_t value = 0;
    // Word-aligned fast path would matter only for much wider registers.
    for (std::size_t i = 0; i < width; ++i) {
        value = (value << 1) | static_cast<std::uint64_t>(get(offset + i));
    }
    return value;
}

void BitString::set_uint(std::size_t offset, std::size_t width, std::uint64_t value) {
    for (std::size_t i = 0; i < width; ++i) {
        set(offset + width - 1 - i, (value >> i) & 1U);
    }
}

void BitString::copy_bits(std::size_t offset, const BitString& src, std::size_t src_offset,
                          std::size_t width) {
    for (std::size_t i = 0; i < width; ++i) {
        set(offset + i, src.get(src_offset + i));
    }
}

void BitString::xor_bits(std::size_t offset, const BitString& src, std::size_t src_offset,
                         std::size_t width) {
    for (std::size_t i = 0; i < width; ++i) {
        if (src.get(src_offset + i)) {
            flip(offset + i);
        }
    }
}

void BitString::swap_ranges(std::size_t a, std::size_t b, std::size_t width) {
    for (std::size_t i = 0; i < width; ++i) {
        const bool x = get(a + i);
        set(a + i, get(b + i));
        set(b + i, x);
    }
}

BitString BitString::slice(std::size_t offset, std::size_t width) const {
    BitString out(width);
    out.copy_bits(0, *this, offset, width);
    return out;
}

bool BitString::range_is_zero(std::size_t offset, std::size_t width) const {
    for (std::size_t i = 0; i < width; ++i) {
        if (get(offset + i)) {
            return false;
        }
    }
    return true;
}

std::size_t BitString::popcount() const {
    std::size_t total = 0;
    for (const auto w : words_) {
        total += static_cast<std::size_t>(std::popcount(w));
    }
    return total;
}

std::size_t BitString::popcount(std::size_t offset, std::size_t width) const {
    std::size_t total = 0;
    for (std::size_t i = 0; i < width; ++i) {
        total += get(offset + i) ? 1 : 0;
    }
    return total;
}

std::string BitString::to_string() const {
    std::string out(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
        if (get(i)) {
            out[i] = '1';
        }
    }
    return out;
}

std::size_t BitString::hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ size_;
    for (const auto w : words_) {
        h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
    if (a.size_ != b.size_) {
        return a.size_ <=> b.size_;
    }
    for (std::size_t i = 0; i < a.words_.size(); ++i) {
        if (a.words_[i] != b.words_[i]) {
            return a.words_[i] <=> b.words_[i];
        }
    }
    return std::strong_ordering::equal;
}

}  // namespace qramc
