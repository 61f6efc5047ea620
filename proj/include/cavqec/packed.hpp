// Copyright 2026 The cavqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace cavqec {

inline size_t words_for(size_t bits) { return (bits + 63) / 64; }

inline bool get_bit(const uint64_t *w, size_t i) { return (w[i >> 6] >> (i & 63)) & 1; }
inline void flip_bit(uint64_t *w, size_t i) { w[i >> 6] ^= uint64_t{1} << (i & 63); }
inline void set_bit(uint64_t *w, size_t i) { w[i >> 6] |= uint64_t{1} << (i & 63); }

inline void xor_words(uint64_t *dst, const uint64_t *src, size_t n) {
    for (size_t k = 0; k < n; k++) {
        dst[k] ^= src[k];
    }
}

inline size_t popcount_words(const uint64_t *w, size_t n) {
    size_t c = 0;
    for (size_t k = 0; k < n; k++) {
        c += std::popcount(w[k]);
    }
    return c;
}

inline bool any_words(const uint64_t *w, size_t n) {
    for (size_t k = 0; k < n; k++) {
        if (w[k]) {
            return true;
        }
    }
    return false;
}

// Index of the lowest set bit at or after `from`, or `limit` if none.
inline size_t next_set_bit(const uint64_t *w, size_t from, size_t limit) {
    size_t nw = words_for(limit);
    size_t k = from >> 6;
    if (k >= nw) {
        return limit;
    }
    uint64_t cur = w[k] & (~uint64_t{0} << (from & 63));
    while (true) {
        if (cur) {
            size_t i = (k << 6) + std::countr_zero(cur);
            return i < limit ? i : limit;
        }
        if (++k >= nw) {
            return limit;
        }
        cur = w[k];
    }
}

// Row-major dense bit matrix used inside elimination routines.
class PackedRows {
   public:
    PackedRows() = default;
    PackedRows(size_t rows, size_t cols) : rows_(rows), cols_(cols), words_(words_for(cols)), data_(rows * words_) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    size_t words() const { return words_; }
    uint64_t *row(size_t r) { return data_.data() + r * words_; }
    const uint64_t *row(size_t r) const { return data_.data() + r * words_; }
    bool get(size_t r, size_t c) const { return get_bit(row(r), c); }
    void set(size_t r, size_t c) { set_bit(row(r), c); }
    void flip(size_t r, size_t c) { flip_bit(row(r), c); }
    void xor_into(size_t dst, size_t src) { xor_words(row(dst), row(src), words_); }
    void swap_rows(size_t a, size_t b) {
        if (a == b) {
            return;
        }
        uint64_t *ra = row(a);
        uint64_t *rb = row(b);
        for (size_t k = 0; k < words_; k++) {
            uint64_t t = ra[k];
            ra[k] = rb[k];
            rb[k] = t;
        }
    }

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    size_t words_ = 0;
    std::vector<uint64_t> data_;
};

}  // namespace cavqec
