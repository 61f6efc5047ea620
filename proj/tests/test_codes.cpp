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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"

using namespace cavqec;
using namespace cavqec::testing;

namespace {

BitMatrix rep(size_t n, Boundary b) {
    BitMatrix h = circulant_from_polynomial({{0, 1}}, n);
    return b == Boundary::open ? open_boundary(h, 1) : h;
}

bool commutes(const BitMatrix &a, const BitMatrix &b) { return a.multiply(b.transpose()).is_zero(); }

}  // namespace

TEST(circulant, one_plus_x_lift5) {
    BitMatrix h = circulant_from_polynomial({{0, 1}}, 5);
    EXPECT_EQ(h, BitMatrix::from_dense({
                     {1, 1, 0, 0, 0},
                     {0, 1, 1, 0, 0},
                     {0, 0, 1, 1, 0},
                     {0, 0, 0, 1, 1},
                     {1, 0, 0, 0, 1},
                 }));
}

TEST(circulant, identity_polynomial) { EXPECT_EQ(circulant_from_polynomial({{0}}, 3), BitMatrix::identity(3)); }

TEST(circulant, classical_15_7_5) {
    BitMatrix h = circulant_from_polynomial({{0, 1, 3, 7}}, 15);
    EXPECT_EQ(h.cols - rank(h), 7u);
    // Minimum weight codeword by enumerating the 2^15 words.
    size_t best = 99;
    for (uint32_t x = 1; x < (1u << 15); x++) {
        std::vector<uint32_t> s;
        for (uint32_t i = 0; i < 15; i++) {
            if ((x >> i) & 1) {
                s.push_back(i);
            }
        }
        if (h.multiply(BitVector(15, s)).is_zero()) {
            best = std::min(best, s.size());
        }
    }
    EXPECT_EQ(best, 5u);
}

TEST(circulant, rejects_large_exponent) { EXPECT_THROW(circulant_from_polynomial({{0, 5}}, 5), std::invalid_argument); }

TEST(open_boundary, examples) {
    BitMatrix h = circulant_from_polynomial({{0, 1}}, 5);
    BitMatrix t = open_boundary(h, 1);
    EXPECT_EQ(t.rows, 4u);
    EXPECT_EQ(t, BitMatrix::from_dense({{1, 1, 0, 0, 0}, {0, 1, 1, 0, 0}, {0, 0, 1, 1, 0}, {0, 0, 0, 1, 1}}));
    EXPECT_EQ(open_boundary(h, 0), h);
    EXPECT_EQ(open_boundary(circulant_from_polynomial({{0, 1}}, 3), 1), BitMatrix::from_dense({{1, 1, 0}, {0, 1, 1}}));
    EXPECT_THROW(open_boundary(h, 5), std::invalid_argument);
}

TEST(hypergraph_product, surface_41) {
    BitMatrix h = rep(5, Boundary::open);
    CssCode c = hypergraph_product(h, h);
    c.validate();
    auto [n, k] = code_parameters(c);
    EXPECT_EQ(n, 41u);
    EXPECT_EQ(k, 1u);
    EXPECT_TRUE(commutes(c.g_x, c.g_z));
    auto d = compute_distance(c, 5);
    EXPECT_TRUE(d.exact);
    EXPECT_EQ(d.value, 5u);
    EXPECT_EQ(brute_distance(c, PauliType::X, 5), 5u);
    EXPECT_EQ(brute_distance(c, PauliType::Z, 5), 5u);
    EXPECT_EQ(std::count(c.sector_of.begin(), c.sector_of.end(), 1), 25);
}

TEST(hypergraph_product, toric_8_2_2) {
    BitMatrix h = circulant_from_polynomial({{0, 1}}, 2);
    CssCode c = hypergraph_product(h, h);
    EXPECT_EQ(code_parameters(c).n, 8u);
    EXPECT_EQ(code_parameters(c).k, 2u);
    auto d = compute_distance(c, 3);
    EXPECT_TRUE(d.exact);
    EXPECT_EQ(d.value, 2u);
    EXPECT_EQ(brute_distance(c, PauliType::X, 3), 2u);
}

TEST(hypergraph_product, golden_parameters) {
    struct Row {
        std::vector<uint32_t> poly;
        size_t lift, n, k;
    };
    for (const Row &r : std::vector<Row>{
             {{0, 1, 2}, 6, 72, 8},
             {{0, 1, 2}, 9, 162, 8},
             {{0, 1, 2}, 12, 288, 8},
             {{0, 1, 3, 7}, 15, 450, 98},
         }) {
        CssCode c = code_from_polynomial({r.poly}, r.lift, Boundary::periodic);
        auto p = code_parameters(c);
        EXPECT_EQ(p.n, r.n) << r.lift;
        EXPECT_EQ(p.k, r.k) << r.lift;
        EXPECT_TRUE(commutes(c.g_x, c.g_z));
        BitMatrix h = circulant_from_polynomial({r.poly}, r.lift);
        EXPECT_EQ(product_logical_count(h, h), r.k);
    }
}

TEST(hypergraph_product, full_rank_square_has_no_logicals) {
    BitMatrix h = circulant_from_polynomial({{0}}, 4);
    CssCode c = hypergraph_product(h, h);
    EXPECT_EQ(code_parameters(c).k, 0u);
    EXPECT_EQ(product_logical_count(h, h), 0u);
    EXPECT_THROW(logical_operators(c), std::invalid_argument);
}

TEST(hypergraph_product, random_products_commute) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; trial++) {
        auto random_h = [&] {
            size_t r = 1 + rng() % 6, c = 1 + rng() % 7;
            std::vector<std::vector<uint8_t>> d(r, std::vector<uint8_t>(c));
            for (auto &row : d) {
                for (auto &b : row) {
                    b = (rng() % 3) == 0;
                }
            }
            BitMatrix m = BitMatrix::from_dense(d);
            m.cols = c;
            return m;
        };
        BitMatrix h1 = random_h(), h2 = random_h();
        CssCode code = hypergraph_product(h1, h2);
        code.validate();
        ASSERT_TRUE(commutes(code.g_x, code.g_z));
        ASSERT_EQ(code.n, h1.cols * h2.cols + h1.rows * h2.rows);
        ASSERT_EQ(code_parameters(code).k, product_logical_count(h1, h2));
    }
}

TEST(distance, lower_bound_when_not_found) {
    BitMatrix h = rep(5, Boundary::open);
    CssCode c = hypergraph_product(h, h);
    auto d = compute_distance(c, 1);
    EXPECT_FALSE(d.exact);
    EXPECT_EQ(d.value, 2u);
}

TEST(distance, x_and_z_agree_on_symmetric_product) {
    CssCode c = hypergraph_product(rep(4, Boundary::open), rep(4, Boundary::open));
    auto dx = compute_distance(c, PauliType::X, 4);
    auto dz = compute_distance(c, PauliType::Z, 4);
    EXPECT_TRUE(dx.exact && dz.exact);
    EXPECT_EQ(dx.value, 4u);
    EXPECT_EQ(dz.value, 4u);
}

void check_logicals(const CssCode &c) {
    LogicalBasis lb = logical_operators(c);
    size_t k = code_parameters(c).k;
    ASSERT_EQ(lb.logical_x.rows, k);
    ASSERT_EQ(lb.logical_z.rows, k);
    EXPECT_TRUE(commutes(lb.logical_x, c.g_z));
    EXPECT_TRUE(commutes(lb.logical_z, c.g_x));
    for (size_t i = 0; i < k; i++) {
        EXPECT_FALSE(in_rowspace(c.g_x, lb.logical_x.row(i)));
        EXPECT_FALSE(in_rowspace(c.g_z, lb.logical_z.row(i)));
    }
    EXPECT_EQ(lb.logical_x.multiply(lb.logical_z.transpose()), BitMatrix::identity(k));
}

TEST(logicals, surface_on_sector1) {
    BitMatrix h = rep(5, Boundary::open);
    CssCode c = hypergraph_product(h, h);
    check_logicals(c);
    // A sector-1-only representative exists for each type: a full row or column of the
    // sector-1 block.
    BitVector lx(c.n), lz(c.n);
    for (uint32_t j = 0; j < 5; j++) {
        lx.support.push_back(j);
        lz.support.push_back(j * 5);
    }
    auto is_logical = [&](const BitVector &v, PauliType t) {
        const BitMatrix &same = c.checks(t);
        const BitMatrix &opp = c.checks(t == PauliType::X ? PauliType::Z : PauliType::X);
        return opp.multiply(v).is_zero() && !in_rowspace(same, v);
    };
    bool x_found = is_logical(lx, PauliType::X) || is_logical(lz, PauliType::X);
    bool z_found = is_logical(lx, PauliType::Z) || is_logical(lz, PauliType::Z);
    EXPECT_TRUE(x_found);
    EXPECT_TRUE(z_found);
}

TEST(logicals, toric_and_72) {
    check_logicals(hypergraph_product(circulant_from_polynomial({{0, 1}}, 2), circulant_from_polynomial({{0, 1}}, 2)));
    check_logicals(code_from_polynomial({{0, 1, 2}}, 6, Boundary::periodic));
}

TEST(layout, surface_grid) {
    BitMatrix h = rep(5, Boundary::open);
    CssCode c = hypergraph_product(h, h);
    Layout lay = layout(c);
    EXPECT_EQ(lay.rows, 9u);
    EXPECT_EQ(lay.cols, 9u);
    // Sector-1 qubits sit on even-even sites, sector-2 on odd-odd sites; no site is shared.
    std::set<std::pair<uint32_t, uint32_t>> seen;
    for (size_t q = 0; q < c.n; q++) {
        auto p = lay.coordinate[q];
        EXPECT_EQ(p.row % 2, c.sector_of[q] == 1 ? 0u : 1u);
        EXPECT_EQ(p.col % 2, c.sector_of[q] == 1 ? 0u : 1u);
        EXPECT_TRUE(seen.insert({p.row, p.col}).second);
    }
}

TEST(layout, checks_on_one_row_and_one_column) {
    for (size_t lift : {6, 15}) {
        CheckPolynomial h = lift == 6 ? CheckPolynomial{{0, 1, 2}} : CheckPolynomial{{0, 1, 3, 7}};
        CssCode c = code_from_polynomial(h, lift, Boundary::periodic);
        Layout lay = layout(c);
        EXPECT_EQ(lay.rows, 2 * lift);
        EXPECT_EQ(lay.cols, 2 * lift);
        for (PauliType t : {PauliType::X, PauliType::Z}) {
            const BitMatrix &m = c.checks(t);
            for (size_t r = 0; r < m.rows; r++) {
                EXPECT_EQ(m.row_supports[r].size(), 2 * h.exponents.size());
                for (uint32_t q : m.row_supports[r]) {
                    auto p = lay.coordinate[q];
                    auto line = lay.check_lines(t)[r];
                    EXPECT_TRUE(p.row == line.row || p.col == line.col);
                }
            }
        }
    }
}

TEST(layout, single_cell) {
    CssCode c = hypergraph_product(circulant_from_polynomial({{0}}, 1), circulant_from_polynomial({{0}}, 1));
    Layout lay = layout(c);
    EXPECT_EQ(lay.cell_rows(), 1u);
    EXPECT_EQ(lay.cell_cols(), 1u);
    EXPECT_EQ(c.n, 2u);
}

TEST(layout, rejects_non_product) {
    CssCode c;
    c.n = 3;
    c.g_x = BitMatrix(1, 3);
    c.g_z = BitMatrix(1, 3);
    EXPECT_THROW(layout(c), std::invalid_argument);
}
