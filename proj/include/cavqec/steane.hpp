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

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cavqec {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Qubit 0 is the most significant bit of a basis index. |0> is spin down, so the
// collective projection of a basis state is m = (#ones - #zeros) / 2.
struct DenseState {
    size_t qubits = 0;
    CMatrix rho;

    DenseState() = default;
    DenseState(size_t q, CMatrix r);
    static DenseState pure(const CVector &psi);

    double trace() const { return rho.trace().real(); }
    // Hermitian, trace in (0, 1], positive semidefinite up to `tol`.
    void validate(double tol = 1e-10) const;
};

CMatrix pauli_string(std::string_view s);  // "XIZY": character q acts on qubit q
CMatrix collective_x(size_t n);             //  (1/2) sum X
CMatrix collective_y(size_t n);             // -(1/2) sum Y
CMatrix collective_z(size_t n);             // -(1/2) sum Z
// exp(i t H) for Hermitian H.
CMatrix exp_i(const CMatrix &h, double t);

// (op on `targets`) * m and m * (op on `targets`) for an operator on a subset of qubits.
CMatrix apply_left(const CMatrix &op, const std::vector<size_t> &targets, const CMatrix &m, size_t qubits);
CMatrix apply_right(const CMatrix &m, const CMatrix &op, const std::vector<size_t> &targets, size_t qubits);
// op rho op^dagger
CMatrix conjugate(const CMatrix &op, const std::vector<size_t> &targets, const CMatrix &rho, size_t qubits);

struct CavityParams {
    double theta = 1.5707963267948966;
    double cooperativity = std::numeric_limits<double>::infinity();
    size_t n = 4;

    double d_n() const;            // [2 (1 + 2^-N)]^(-1/2)
    double inv_sqrt_c() const;     // 0 in the lossless limit
    double alpha() const;          // theta / (sqrt(C) d_N)
    double flip_weight() const { return 2 * alpha(); }
    void validate() const;
};

// Dicke states as columns, k = 0..N ones, i.e. m = k - N/2.
CMatrix dicke_basis(size_t n);

// rho_{m,m'} -> rho_{m,m'} exp(i theta_{m,m'}) in the collective basis. Throws if rho has
// weight outside the symmetric subspace above 1e-10.
CMatrix phase_map(const CMatrix &rho, const CavityParams &params);

// Cat encoder built from the cavity map: rotate about y, apply phase_map, rotate back.
CMatrix encode_with_cavity(const CMatrix &rho, const CavityParams &params);

// tau + 2 alpha J_x tau J_x - alpha (J_x^2 tau + tau J_x^2), tau the lossless encoder output.
CMatrix first_order_map(const CMatrix &rho, const CavityParams &params);
// Same expansion around an arbitrary lossless output tau on the first params.n qubits of a
// `qubits`-qubit register.
CMatrix first_order_expansion(const CMatrix &tau, const CavityParams &params, size_t qubits);

struct CheckResult {
    std::string name;
    double deviation = 0;
    double tolerance = 0;
    bool passed = false;
};

struct VerifierReport {
    std::string name;
    std::vector<CheckResult> checks;
    std::map<std::string, double> metrics;

    void check(const std::string &what, double deviation, double tolerance);
    bool passed() const;
};

// One entry of the first-order faulty-encoder table: ancilla flips i and j (1-based) and the
// data qubits they implicate.
struct FlipBlock {
    int i = 0, j = 0;
    int p = 0, q = 0;
    std::array<int, 3> rest_i{};
    std::array<int, 3> rest_j{};
    double deviation = 0;  // worst of the all-zero-side and all-one-side blocks
};

enum class SteaneCase { perfect_perfect, faulty_encode, faulty_decode };

std::string to_string(SteaneCase c);
SteaneCase steane_case_from_string(const std::string &s);

// Four ancillas (qubits 0..3) measure M = X4 X5 X6 X7 on seven data qubits (qubits 4..10);
// ancilla i couples to data qubit 8 - i.
VerifierReport run_case(SteaneCase c, double cooperativity = 1e6, uint64_t seed = 1);
std::vector<FlipBlock> flip_block_table(double cooperativity = 1e6, uint64_t seed = 1);

VerifierReport heisenberg_check();
VerifierReport ghz_merge_check();
VerifierReport cavity_map_check(double cooperativity = 1e6);

}  // namespace cavqec
