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

#include <cstdint>
#include <string>
#include <vector>

#include "cavqec/gf2.hpp"

namespace cavqec {

struct CheckPolynomial {
    std::vector<uint32_t> exponents;

    uint32_t degree() const;
};

enum class Boundary { periodic, open };
enum class PauliType { X, Z };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string &s);

// CSS code. For hypergraph products the qubit order is
//   sector 1: (i, j) -> i*n2 + j           for i < n1, j < n2
//   sector 2: (a, b) -> n1*n2 + a*r2 + b   for a < r1, b < r2
// X-check (i, b) is row i*r2 + b of g_x and Z-check (a, j) is row a*n2 + j of g_z.
struct CssCode {
    BitMatrix g_x;
    BitMatrix g_z;
    size_t n = 0;
    std::vector<uint8_t> sector_of;
    size_t n1 = 0, n2 = 0, r1 = 0, r2 = 0;
    Boundary boundary = Boundary::open;

    bool is_hypergraph_product() const { return n1 > 0 && n2 > 0; }
    const BitMatrix &checks(PauliType t) const { return t == PauliType::X ? g_x : g_z; }
    size_t max_check_weight() const;
    void validate() const;
};

struct CodeParameters {
    size_t n;
    size_t k;
};

struct LogicalBasis {
    BitMatrix logical_x;
    BitMatrix logical_z;
};

struct DistanceResult {
    bool exact = false;
    // Exact distance, or the lower bound w_max + 1 when nothing was found.
    size_t value = 0;
};

BitMatrix circulant_from_polynomial(const CheckPolynomial &h, size_t lift);
BitMatrix open_boundary(const BitMatrix &h, size_t delete_rows);
CssCode hypergraph_product(const BitMatrix &h1, const BitMatrix &h2);
// Circulant of h, trimmed by deg(h) trailing rows for open boundaries, producted with itself.
CssCode code_from_polynomial(const CheckPolynomial &h, size_t lift, Boundary boundary);

CodeParameters code_parameters(const CssCode &code);
// Classical-dimension formula k1*k2 + k1t*k2t, used to cross-check code_parameters.
size_t product_logical_count(const BitMatrix &h1, const BitMatrix &h2);

// Weight of the lightest operator of the given Pauli type that commutes with every check
// of the other type and lies outside the rowspace of its own type.
DistanceResult compute_distance(const CssCode &code, PauliType type, size_t w_max);
DistanceResult compute_distance(const CssCode &code, size_t w_max);

LogicalBasis logical_operators(const CssCode &code);

struct GridPoint {
    uint32_t row = 0;
    uint32_t col = 0;
    bool operator==(const GridPoint &) const = default;
};

// Interleaved grid: sector-1 qubit (i, j) at (2i, 2j), sector-2 qubit (a, b) at
// (2a+1, 2b+1). X-check (i, b) occupies grid row 2i and grid column 2b+1; Z-check (a, j)
// occupies grid row 2a+1 and grid column 2j.
struct Layout {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<GridPoint> coordinate;
    std::vector<GridPoint> x_check_lines;
    std::vector<GridPoint> z_check_lines;
    bool periodic = false;

    size_t cell_rows() const { return (rows + 1) / 2; }
    size_t cell_cols() const { return (cols + 1) / 2; }
    const std::vector<GridPoint> &check_lines(PauliType t) const { return t == PauliType::X ? x_check_lines : z_check_lines; }
};

Layout layout(const CssCode &code);

}  // namespace cavqec
