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

#include "cavqec/codes.hpp"

#include <algorithm>
#include <stdexcept>

#include "cavqec/packed.hpp"

namespace cavqec {

uint32_t CheckPolynomial::degree() const {
    if (exponents.empty()) {
        throw std::invalid_argument("check polynomial must be nonempty");
    }
    return *std::max_element(exponents.begin(), exponents.end());
}

std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

Boundary boundary_from_string(const std::string &s) {
    if (s == "periodic") {
        return Boundary::periodic;
    }
    if (s == "open") {
        return Boundary::open;
    }
    throw std::invalid_argument("unknown boundary '" + s + "'");
}

size_t CssCode::max_check_weight() const {
    size_t w = 0;
    for (const BitMatrix *m : {&g_x, &g_z}) {
        for (const auto &r : m->row_supports) {
            w = std::max(w, r.size());
        }
    }
    return w;
}

void CssCode::validate() const {
    g_x.validate();
    g_z.validate();
    if (g_x.cols != n || g_z.cols != n || sector_of.size() != n) {
        throw std::invalid_argument("CssCode dimensions disagree with n");
    }
    if (!g_x.multiply(g_z.transpose()).is_zero()) {
        throw std::invalid_argument("CssCode generators do not commute");
    }
}

BitMatrix circulant_from_polynomial(const CheckPolynomial &h, size_t lift) {
    if (h.exponents.empty()) {
        throw std::invalid_argument("check polynomial must be nonempty");
    }
    if (h.degree() >= lift) {
        throw std::invalid_argument("polynomial exponent must be below the lift");
    }
    BitMatrix m(lift, lift);
    for (size_t i = 0; i < lift; i++) {
        std::vector<uint32_t> row;
        for (uint32_t e : h.exponents) {
            row.push_back((uint32_t)((e + i) % lift));
        }
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        m.row_supports[i] = std::move(row);
    }
    return m;
}

BitMatrix open_boundary(const BitMatrix &h, size_t delete_rows) {
    if (delete_rows >= h.rows) {
        throw std::invalid_argument("open_boundary must keep at least one row");
    }
    BitMatrix out(h.rows - delete_rows, h.cols);
    std::copy(h.row_supports.begin(), h.row_supports.begin() + (ptrdiff_t)out.rows, out.row_supports.begin());
    return out;
}

CssCode hypergraph_product(const BitMatrix &h1, const BitMatrix &h2) {
    CssCode code;
    code.r1 = h1.rows;
    code.n1 = h1.cols;
    code.r2 = h2.rows;
    code.n2 = h2.cols;
    size_t s1 = code.n1 * code.n2;
    code.n = s1 + code.r1 * code.r2;
    code.g_x = hstack(kron(BitMatrix::identity(code.n1), h2), kron(h1.transpose(), BitMatrix::identity(code.r2)));
    code.g_z = hstack(kron(h1, BitMatrix::identity(code.n2)), kron(BitMatrix::identity(code.r1), h2.transpose()));
    code.sector_of.assign(code.n, 2);
    std::fill(code.sector_of.begin(), code.sector_of.begin() + (ptrdiff_t)s1, 1);
    return code;
}

CssCode code_from_polynomial(const CheckPolynomial &h, size_t lift, Boundary boundary) {
    BitMatrix m = circulant_from_polynomial(h, lift);
    if (boundary == Boundary::open) {
        m = open_boundary(m, h.degree());
    }
    CssCode code = hypergraph_product(m, m);
    code.boundary = boundary;
    return code;
}

CodeParameters code_parameters(const CssCode &code) {
    return {code.n, code.n - rank(code.g_x) - rank(code.g_z)};
}

size_t product_logical_count(const BitMatrix &h1, const BitMatrix &h2) {
    size_t rk1 = rank(h1);
    size_t rk2 = rank(h2);
    size_t k1 = h1.cols - rk1, k2 = h2.cols - rk2;
    size_t k1t = h1.rows - rk1, k2t = h2.rows - rk2;
    return k1 * k2 + k1t * k2t;
}

DistanceResult compute_distance(const CssCode &code, PauliType type, size_t w_max) {
    if (w_max < 1) {
        throw std::invalid_argument("w_max must be at least 1");
    }
    const BitMatrix &same = code.checks(type);
    const BitMatrix &other = code.checks(type == PauliType::X ? PauliType::Z : PauliType::X);
    size_t n = code.n;
    size_t words = words_for(other.rows);

    // Column syndromes of the opposite-type checks, packed.
    std::vector<uint64_t> colsyn(n * words, 0);
    for (size_t r = 0; r < other.rows; r++) {
        for (uint32_t c : other.row_supports[r]) {
            set_bit(&colsyn[c * words], r);
        }
    }
    RowReducer stabilizers(same);

    for (size_t w = 1; w <= std::min(w_max, n); w++) {
        // Colex enumeration; partial[j] caches the XOR of columns c[j..w-1].
        std::vector<size_t> c(w);
        for (size_t i = 0; i < w; i++) {
            c[i] = i;
        }
        std::vector<uint64_t> partial((w + 1) * words, 0);
        auto refresh = [&](size_t top) {
            for (size_t j = top + 1; j-- > 0;) {
                uint64_t *dst = &partial[j * words];
                const uint64_t *above = &partial[(j + 1) * words];
                const uint64_t *col = &colsyn[c[j] * words];
                for (size_t k = 0; k < words; k++) {
                    dst[k] = above[k] ^ col[k];
                }
            }
        };
        refresh(w - 1);
        while (true) {
            if (!any_words(&partial[0], words)) {
                BitVector v(n);
                for (size_t i = 0; i < w; i++) {
                    v.support.push_back((uint32_t)c[i]);
                }
                if (!stabilizers.contains(v)) {
                    return {true, w};
                }
            }
            size_t j = 0;
            while (j < w && c[j] + 1 == (j + 1 < w ? c[j + 1] : n)) {
                j++;
            }
            if (j == w) {
                break;
            }
            c[j]++;
            for (size_t i = 0; i < j; i++) {
                c[i] = i;
            }
            refresh(j);
        }
    }
    return {false, w_max + 1};
}

DistanceResult compute_distance(const CssCode &code, size_t w_max) {
    // Sweep weight levels jointly so an exact answer is only claimed once both types have
    // been exhausted below it.
    for (size_t w = 1; w <= w_max; w++) {
        for (PauliType t : {PauliType::X, PauliType::Z}) {
            DistanceResult r = compute_distance(code, t, w);
            if (r.exact) {
                return r;
            }
        }
    }
    return {false, w_max + 1};
}

namespace {

BitMatrix independent_logicals(const CssCode &code, PauliType type, size_t k) {
    const BitMatrix &same = code.checks(type);
    const BitMatrix &other = code.checks(type == PauliType::X ? PauliType::Z : PauliType::X);
    // Reduce preferring sector-2 pivots so representatives lean on sector-1 qubits.
    std::vector<uint32_t> priority;
    for (size_t q = 0; q < code.n; q++) {
        if (code.sector_of[q] == 2) {
            priority.push_back((uint32_t)q);
        }
    }
    for (size_t q = 0; q < code.n; q++) {
        if (code.sector_of[q] != 2) {
            priority.push_back((uint32_t)q);
        }
    }
    RowReducer stabilizers(same, priority);
    RowReducer span(same, priority);
    BitMatrix out(0, code.n);
    BitMatrix ker = kernel_basis(other);
    for (size_t r = 0; r < ker.rows && out.rows < k; r++) {
        BitVector v = ker.row(r);
        if (span.insert(v)) {
            out.append_row(stabilizers.reduce(v).support);
        }
    }
    if (out.rows != k) {
        throw std::logic_error("logical operator count disagrees with code parameters");
    }
    return out;
}

// Inverse of a square GF(2) matrix given as dense rows.
std::vector<std::vector<uint8_t>> invert(std::vector<std::vector<uint8_t>> a) {
    size_t k = a.size();
    std::vector<std::vector<uint8_t>> inv(k, std::vector<uint8_t>(k, 0));
    for (size_t i = 0; i < k; i++) {
        inv[i][i] = 1;
    }
    for (size_t c = 0; c < k; c++) {
        size_t p = c;
        while (p < k && !a[p][c]) {
            p++;
        }
        if (p == k) {
            throw std::logic_error("logical pairing matrix is singular");
        }
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        for (size_t r = 0; r < k; r++) {
            if (r != c && a[r][c]) {
                for (size_t j = 0; j < k; j++) {
                    a[r][j] ^= a[c][j];
                    inv[r][j] ^= inv[c][j];
                }
            }
        }
    }
    return inv;
}

}  // namespace

LogicalBasis logical_operators(const CssCode &code) {
    size_t k = code_parameters(code).k;
    if (k == 0) {
        throw std::invalid_argument("code encodes no logical qubits");
    }
    LogicalBasis basis;
    basis.logical_x = independent_logicals(code, PauliType::X, k);
    BitMatrix lz = independent_logicals(code, PauliType::Z, k);

    std::vector<std::vector<uint8_t>> pairing(k, std::vector<uint8_t>(k, 0));
    auto zt = lz.to_dense();
    for (size_t i = 0; i < k; i++) {
        for (uint32_t q : basis.logical_x.row_supports[i]) {
            for (size_t j = 0; j < k; j++) {
                pairing[i][j] ^= zt[j][q];
            }
        }
    }
    // Replace Z logicals by (P^-1)^T * Lz so the pairing becomes the identity.
    auto inv = invert(pairing);
    basis.logical_z = BitMatrix(0, code.n);
    for (size_t j = 0; j < k; j++) {
        std::vector<uint8_t> acc(code.n, 0);
        for (size_t l = 0; l < k; l++) {
            if (inv[l][j]) {
                for (uint32_t q : lz.row_supports[l]) {
                    acc[q] ^= 1;
                }
            }
        }
        basis.logical_z.append_row(BitVector::from_bits(acc).support);
    }
    return basis;
}

Layout layout(const CssCode &code) {
    if (!code.is_hypergraph_product()) {
        throw std::invalid_argument("layout requires a hypergraph-product code");
    }
    Layout lay;
    lay.rows = std::max(2 * code.n1 - 1, 2 * code.r1);
    lay.cols = std::max(2 * code.n2 - 1, 2 * code.r2);
    lay.periodic = code.boundary == Boundary::periodic;
    lay.coordinate.resize(code.n);
    for (size_t i = 0; i < code.n1; i++) {
        for (size_t j = 0; j < code.n2; j++) {
            lay.coordinate[i * code.n2 + j] = {(uint32_t)(2 * i), (uint32_t)(2 * j)};
        }
    }
    size_t s1 = code.n1 * code.n2;
    for (size_t a = 0; a < code.r1; a++) {
        for (size_t b = 0; b < code.r2; b++) {
            lay.coordinate[s1 + a * code.r2 + b] = {(uint32_t)(2 * a + 1), (uint32_t)(2 * b + 1)};
        }
    }
    for (size_t i = 0; i < code.n1; i++) {
        for (size_t b = 0; b < code.r2; b++) {
            lay.x_check_lines.push_back({(uint32_t)(2 * i), (uint32_t)(2 * b + 1)});
        }
    }
    for (size_t a = 0; a < code.r1; a++) {
        for (size_t j = 0; j < code.n2; j++) {
            lay.z_check_lines.push_back({(uint32_t)(2 * a + 1), (uint32_t)(2 * j)});
        }
    }
    for (PauliType t : {PauliType::X, PauliType::Z}) {
        const BitMatrix &m = code.checks(t);
        const auto &lines = lay.check_lines(t);
        if (m.rows != lines.size()) {
            throw std::invalid_argument("check count does not match the product structure");
        }
        for (size_t r = 0; r < m.rows; r++) {
            for (uint32_t q : m.row_supports[r]) {
                const GridPoint &p = lay.coordinate[q];
                if (p.row != lines[r].row && p.col != lines[r].col) {
                    throw std::invalid_argument("check support spans more than one row and one column");
                }
            }
        }
    }
    return lay;
}

}  // namespace cavqec
