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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cavqec {

struct BitVector {
    size_t length = 0;
    std::vector<uint32_t> support;

    BitVector() = default;
    explicit BitVector(size_t n) : length(n) {}
    BitVector(size_t n, std::vector<uint32_t> ones);

    static BitVector from_bits(const std::vector<uint8_t> &bits);
    std::vector<uint8_t> to_bits() const;

    bool get(size_t i) const;
    size_t weight() const { return support.size(); }
    bool is_zero() const { return support.empty(); }
    // Symmetric difference of supports.
    BitVector &operator^=(const BitVector &other);
    bool operator==(const BitVector &other) const = default;

    // Throws std::invalid_argument if the support is unsorted, repeated, or out of range.
    void validate() const;
};

struct BitMatrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<std::vector<uint32_t>> row_supports;

    BitMatrix() = default;
    BitMatrix(size_t r, size_t c) : rows(r), cols(c), row_supports(r) {}

    static BitMatrix identity(size_t n);
    static BitMatrix from_dense(const std::vector<std::vector<uint8_t>> &dense);
    std::vector<std::vector<uint8_t>> to_dense() const;

    bool get(size_t r, size_t c) const;
    BitVector row(size_t r) const { return BitVector(cols, row_supports[r]); }
    void append_row(std::vector<uint32_t> support);

    BitMatrix transpose() const;
    BitVector multiply(const BitVector &x) const;
    BitMatrix multiply(const BitMatrix &other) const;
    bool is_zero() const;
    bool operator==(const BitMatrix &other) const = default;

    void validate() const;
};

BitMatrix kron(const BitMatrix &a, const BitMatrix &b);
BitMatrix hstack(const BitMatrix &left, const BitMatrix &right);

size_t rank(const BitMatrix &m);
BitMatrix kernel_basis(const BitMatrix &m);
// nullopt means s is not in the column space of m.
std::optional<BitVector> solve(const BitMatrix &m, const BitVector &s);
bool in_rowspace(const BitMatrix &m, const BitVector &v);

// Row-echelon basis of a rowspace that reduces vectors against it. Pivot columns are
// chosen following `column_priority`, so the reduction clears those columns first.
class RowReducer {
   public:
    RowReducer(const BitMatrix &m, const std::vector<uint32_t> &column_priority);
    explicit RowReducer(const BitMatrix &m);

    size_t rank() const { return basis_.size(); }
    BitVector reduce(const BitVector &v) const;
    bool contains(const BitVector &v) const { return reduce(v).is_zero(); }
    // Adds v to the spanned space; returns false if it was already inside.
    bool insert(const BitVector &v);

   private:
    size_t cols_;
    std::vector<uint32_t> priority_;
    std::vector<uint32_t> rank_of_col_;
    std::vector<std::vector<uint64_t>> basis_;
    std::vector<uint32_t> pivot_;
    void reduce_words(std::vector<uint64_t> &w) const;
};

// Text form: "rows cols" then one line per row listing 0-based column indices.
std::string to_text(const BitMatrix &m);
BitMatrix bitmatrix_from_text(std::string_view text);

}  // namespace cavqec
