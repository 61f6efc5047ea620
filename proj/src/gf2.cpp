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

#include "cavqec/gf2.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cavqec/packed.hpp"

namespace cavqec {

namespace {

constexpr size_t kNone = std::numeric_limits<size_t>::max();

PackedRows pack(const BitMatrix &m, size_t extra_cols = 0) {
    PackedRows a(m.rows, m.cols + extra_cols);
    for (size_t r = 0; r < m.rows; r++) {
        for (uint32_t c : m.row_supports[r]) {
            a.set(r, c);
        }
    }
    return a;
}

// Gauss-Jordan elimination visiting columns in `order`. The pivot row for each column is
// the sparsest remaining candidate, lowest row index on ties. On return row i holds the
// pivot for column pivots[i], and that column is zero in every other row.
std::vector<uint32_t> eliminate(PackedRows &a, const std::vector<uint32_t> &order) {
    std::vector<uint32_t> pivots;
    size_t r = 0;
    for (uint32_t c : order) {
        if (r == a.rows()) {
            break;
        }
        size_t best = kNone;
        size_t best_weight = 0;
        for (size_t i = r; i < a.rows(); i++) {
            if (!a.get(i, c)) {
                continue;
            }
            size_t w = popcount_words(a.row(i), a.words());
            if (best == kNone || w < best_weight) {
                best = i;
                best_weight = w;
            }
        }
        if (best == kNone) {
            continue;
        }
        a.swap_rows(r, best);
        for (size_t i = 0; i < a.rows(); i++) {
            if (i != r && a.get(i, c)) {
                a.xor_into(i, r);
            }
        }
        pivots.push_back(c);
        r++;
    }
    return pivots;
}

std::vector<uint32_t> natural_order(size_t n) {
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    return order;
}

}  // namespace

BitVector::BitVector(size_t n, std::vector<uint32_t> ones) : length(n), support(std::move(ones)) {
    std::sort(support.begin(), support.end());
}

BitVector BitVector::from_bits(const std::vector<uint8_t> &bits) {
    BitVector v(bits.size());
    for (size_t i = 0; i < bits.size(); i++) {
        if (bits[i] & 1) {
            v.support.push_back((uint32_t)i);
        }
    }
    return v;
}

std::vector<uint8_t> BitVector::to_bits() const {
    std::vector<uint8_t> bits(length, 0);
    for (uint32_t i : support) {
        bits[i] = 1;
    }
    return bits;
}

bool BitVector::get(size_t i) const { return std::binary_search(support.begin(), support.end(), (uint32_t)i); }

BitVector &BitVector::operator^=(const BitVector &other) {
    if (other.length != length) {
        throw std::invalid_argument("BitVector length mismatch");
    }
    std::vector<uint32_t> out;
    std::set_symmetric_difference(support.begin(), support.end(), other.support.begin(), other.support.end(),
                                  std::back_inserter(out));
    support = std::move(out);
    return *this;
}

void BitVector::validate() const {
    for (size_t k = 0; k < support.size(); k++) {
        if (support[k] >= length || (k > 0 && support[k] <= support[k - 1])) {
            throw std::invalid_argument("BitVector support must be strictly increasing and in range");
        }
    }
}

BitMatrix BitMatrix::identity(size_t n) {
    BitMatrix m(n, n);
    for (size_t i = 0; i < n; i++) {
        m.row_supports[i].push_back((uint32_t)i);
    }
    return m;
}

BitMatrix BitMatrix::from_dense(const std::vector<std::vector<uint8_t>> &dense) {
    BitMatrix m(dense.size(), dense.empty() ? 0 : dense[0].size());
    for (size_t r = 0; r < m.rows; r++) {
        if (dense[r].size() != m.cols) {
            throw std::invalid_argument("ragged dense matrix");
        }
        for (size_t c = 0; c < m.cols; c++) {
            if (dense[r][c] & 1) {
                m.row_supports[r].push_back((uint32_t)c);
            }
        }
    }
    return m;
}

std::vector<std::vector<uint8_t>> BitMatrix::to_dense() const {
    std::vector<std::vector<uint8_t>> d(rows, std::vector<uint8_t>(cols, 0));
    for (size_t r = 0; r < rows; r++) {
        for (uint32_t c : row_supports[r]) {
            d[r][c] = 1;
        }
    }
    return d;
}

bool BitMatrix::get(size_t r, size_t c) const {
    const auto &s = row_supports[r];
    return std::binary_search(s.begin(), s.end(), (uint32_t)c);
}

void BitMatrix::append_row(std::vector<uint32_t> support) {
    std::sort(support.begin(), support.end());
    row_supports.push_back(std::move(support));
    rows++;
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols, rows);
    for (size_t r = 0; r < rows; r++) {
        for (uint32_t c : row_supports[r]) {
            t.row_supports[c].push_back((uint32_t)r);
        }
    }
    return t;
}

BitVector BitMatrix::multiply(const BitVector &x) const {
    if (x.length != cols) {
        throw std::invalid_argument("BitMatrix::multiply dimension mismatch");
    }
    BitVector y(rows);
    for (size_t r = 0; r < rows; r++) {
        size_t parity = 0;
        for (uint32_t c : row_supports[r]) {
            parity ^= x.get(c);
        }
        if (parity) {
            y.support.push_back((uint32_t)r);
        }
    }
    return y;
}

BitMatrix BitMatrix::multiply(const BitMatrix &other) const {
    if (other.rows != cols) {
        throw std::invalid_argument("BitMatrix::multiply dimension mismatch");
    }
    BitMatrix out(rows, other.cols);
    std::vector<uint8_t> acc(other.cols);
    for (size_t r = 0; r < rows; r++) {
        std::fill(acc.begin(), acc.end(), 0);
        for (uint32_t k : row_supports[r]) {
            for (uint32_t c : other.row_supports[k]) {
                acc[c] ^= 1;
            }
        }
        for (size_t c = 0; c < other.cols; c++) {
            if (acc[c]) {
                out.row_supports[r].push_back((uint32_t)c);
            }
        }
    }
    return out;
}

bool BitMatrix::is_zero() const {
    for (const auto &s : row_supports) {
        if (!s.empty()) {
            return false;
        }
    }
    return true;
}

void BitMatrix::validate() const {
    if (row_supports.size() != rows) {
        throw std::invalid_argument("BitMatrix row count mismatch");
    }
    for (const auto &s : row_supports) {
        BitVector(cols, s).validate();
        for (size_t k = 1; k < s.size(); k++) {
            if (s[k] <= s[k - 1]) {
                throw std::invalid_argument("BitMatrix row support unsorted or repeated");
            }
        }
    }
}

BitMatrix kron(const BitMatrix &a, const BitMatrix &b) {
    BitMatrix out(a.rows * b.rows, a.cols * b.cols);
    for (size_t ra = 0; ra < a.rows; ra++) {
        for (size_t rb = 0; rb < b.rows; rb++) {
            auto &row = out.row_supports[ra * b.rows + rb];
            for (uint32_t ca : a.row_supports[ra]) {
                for (uint32_t cb : b.row_supports[rb]) {
                    row.push_back((uint32_t)(ca * b.cols + cb));
                }
            }
        }
    }
    return out;
}

BitMatrix hstack(const BitMatrix &left, const BitMatrix &right) {
    if (left.rows != right.rows) {
        throw std::invalid_argument("hstack row mismatch");
    }
    BitMatrix out(left.rows, left.cols + right.cols);
    for (size_t r = 0; r < left.rows; r++) {
        auto &row = out.row_supports[r];
        row = left.row_supports[r];
        for (uint32_t c : right.row_supports[r]) {
            row.push_back((uint32_t)(c + left.cols));
        }
    }
    return out;
}

size_t rank(const BitMatrix &m) {
    PackedRows a = pack(m);
    return eliminate(a, natural_order(m.cols)).size();
}

BitMatrix kernel_basis(const BitMatrix &m) {
    PackedRows a = pack(m);
    auto pivots = eliminate(a, natural_order(m.cols));
    std::vector<uint8_t> is_pivot(m.cols, 0);
    for (uint32_t c : pivots) {
        is_pivot[c] = 1;
    }
    BitMatrix basis(0, m.cols);
    for (size_t f = 0; f < m.cols; f++) {
        if (is_pivot[f]) {
            continue;
        }
        std::vector<uint32_t> v{(uint32_t)f};
        for (size_t r = 0; r < pivots.size(); r++) {
            if (a.get(r, f)) {
                v.push_back(pivots[r]);
            }
        }
        basis.append_row(std::move(v));
    }
    return basis;
}

std::optional<BitVector> solve(const BitMatrix &m, const BitVector &s) {
    if (s.length != m.rows) {
        throw std::invalid_argument("solve: syndrome length must equal row count");
    }
    PackedRows a = pack(m, 1);
    for (uint32_t r : s.support) {
        a.set(r, m.cols);
    }
    auto pivots = eliminate(a, natural_order(m.cols));
    for (size_t r = pivots.size(); r < m.rows; r++) {
        if (a.get(r, m.cols)) {
            return std::nullopt;
        }
    }
    BitVector x(m.cols);
    for (size_t r = 0; r < pivots.size(); r++) {
        if (a.get(r, m.cols)) {
            x.support.push_back(pivots[r]);
        }
    }
    std::sort(x.support.begin(), x.support.end());
    return x;
}

bool in_rowspace(const BitMatrix &m, const BitVector &v) {
    if (v.length != m.cols) {
        throw std::invalid_argument("in_rowspace: vector length must equal column count");
    }
    return RowReducer(m).contains(v);
}

RowReducer::RowReducer(const BitMatrix &m) : RowReducer(m, natural_order(m.cols)) {}

RowReducer::RowReducer(const BitMatrix &m, const std::vector<uint32_t> &column_priority)
    : cols_(m.cols), priority_(column_priority), rank_of_col_(m.cols, std::numeric_limits<uint32_t>::max()) {
    for (size_t k = 0; k < priority_.size(); k++) {
        rank_of_col_[priority_[k]] = (uint32_t)k;
    }
    PackedRows a = pack(m);
    auto pivots = eliminate(a, priority_);
    for (size_t r = 0; r < pivots.size(); r++) {
        basis_.emplace_back(a.row(r), a.row(r) + a.words());
        pivot_.push_back(pivots[r]);
    }
}

void RowReducer::reduce_words(std::vector<uint64_t> &w) const {
    for (size_t i = 0; i < basis_.size(); i++) {
        if (get_bit(w.data(), pivot_[i])) {
            xor_words(w.data(), basis_[i].data(), w.size());
        }
    }
}

BitVector RowReducer::reduce(const BitVector &v) const {
    if (v.length != cols_) {
        throw std::invalid_argument("RowReducer::reduce length mismatch");
    }
    std::vector<uint64_t> w(words_for(cols_), 0);
    for (uint32_t i : v.support) {
        set_bit(w.data(), i);
    }
    reduce_words(w);
    BitVector out(cols_);
    for (size_t i = next_set_bit(w.data(), 0, cols_); i < cols_; i = next_set_bit(w.data(), i + 1, cols_)) {
        out.support.push_back((uint32_t)i);
    }
    return out;
}

bool RowReducer::insert(const BitVector &v) {
    std::vector<uint64_t> w(words_for(cols_), 0);
    for (uint32_t i : v.support) {
        set_bit(w.data(), i);
    }
    reduce_words(w);
    size_t pivot = cols_;
    uint32_t best = std::numeric_limits<uint32_t>::max();
    for (size_t i = next_set_bit(w.data(), 0, cols_); i < cols_; i = next_set_bit(w.data(), i + 1, cols_)) {
        if (pivot == cols_ || rank_of_col_[i] < best) {
            pivot = i;
            best = rank_of_col_[i];
        }
    }
    if (pivot == cols_) {
        return false;
    }
    for (auto &b : basis_) {
        if (get_bit(b.data(), pivot)) {
            xor_words(b.data(), w.data(), w.size());
        }
    }
    basis_.push_back(std::move(w));
    pivot_.push_back((uint32_t)pivot);
    return true;
}

std::string to_text(const BitMatrix &m) {
    std::ostringstream out;
    out << m.rows << " " << m.cols << "\n";
    for (const auto &s : m.row_supports) {
        for (size_t k = 0; k < s.size(); k++) {
            out << (k ? " " : "") << s[k];
        }
        out << "\n";
    }
    return out.str();
}

BitMatrix bitmatrix_from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("BitMatrix text: missing header");
    }
    std::istringstream header(line);
    size_t rows = 0;
    size_t cols = 0;
    if (!(header >> rows >> cols)) {
        throw std::invalid_argument("BitMatrix text: bad header");
    }
    BitMatrix m(rows, cols);
    for (size_t r = 0; r < rows; r++) {
        if (!std::getline(in, line)) {
            line.clear();
        }
        std::istringstream ls(line);
        long long c;
        while (ls >> c) {
            if (c < 0 || (size_t)c >= cols) {
                throw std::invalid_argument("BitMatrix text: column index out of range");
            }
            m.row_supports[r].push_back((uint32_t)c);
        }
        std::sort(m.row_supports[r].begin(), m.row_supports[r].end());
    }
    m.validate();
    return m;
}

}  // namespace cavqec
