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

#include "cavqec/steane.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cavqec/schedule.hpp"

namespace cavqec {

namespace {

constexpr size_t kAncillas = 4;
constexpr size_t kData = 7;
constexpr size_t kQubits = kAncillas + kData;
constexpr size_t kDataDim = size_t{1} << kData;
constexpr double kHalfPi = std::numbers::pi / 2;

double max_abs(const CMatrix &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMatrix single_pauli(char c) {
    CMatrix p = CMatrix::Zero(2, 2);
    switch (c) {
        case 'I':
            p(0, 0) = p(1, 1) = 1;
            break;
        case 'X':
            p(0, 1) = p(1, 0) = 1;
            break;
        case 'Y':
            p(0, 1) = cplx(0, -1);
            p(1, 0) = cplx(0, 1);
            break;
        case 'Z':
            p(0, 0) = 1;
            p(1, 1) = -1;
            break;
        default:
            throw std::invalid_argument(std::string("not a Pauli letter: ") + c);
    }
    return p;
}

CMatrix single_site_sum(size_t n, char c) {
    size_t dim = size_t{1} << n;
    CMatrix out = CMatrix::Zero(dim, dim);
    for (size_t q = 0; q < n; q++) {
        std::string s(n, 'I');
        s[q] = c;
        out += pauli_string(s);
    }
    return out;
}

CMatrix cnot_matrix() {
    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return m;
}

// Data operator with X on the listed 1-based data qubits.
CMatrix data_x(std::initializer_list<int> qubits) {
    std::string s(kData, 'I');
    for (int q : qubits) {
        s[q - 1] = 'X';
    }
    return pauli_string(s);
}

CMatrix data_x(const std::array<int, 3> &qubits) {
    std::string s(kData, 'I');
    for (int q : qubits) {
        s[q - 1] = 'X';
    }
    return pauli_string(s);
}

CMatrix stabilizer_m() { return data_x({4, 5, 6, 7}); }

CVector random_data_state(uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    CVector psi(kDataDim);
    for (auto &a : psi) {
        a = cplx(g(rng), g(rng));
    }
    return psi.normalized();
}

CVector plus_eigenstate(uint64_t seed) {
    CMatrix proj = (CMatrix::Identity(kDataDim, kDataDim) + stabilizer_m()) / 2.0;
    CVector psi = proj * random_data_state(seed);
    return psi.normalized();
}

CMatrix ancilla_zero() {
    CMatrix r = CMatrix::Zero(16, 16);
    r(0, 0) = 1;
    return r;
}

std::vector<size_t> ancilla_targets() { return {0, 1, 2, 3}; }

CMatrix lossless_decoder() {
    CMatrix jx = collective_x(kAncillas);
    return exp_i(jx * jx, -kHalfPi);
}

// Ancilla i (1-based) controls data qubit 8 - i, i.e. register qubit 11 - i.
CMatrix couple(const CMatrix &rho) {
    CMatrix out = rho;
    for (size_t i = 1; i <= kAncillas; i++) {
        out = conjugate(cnot_matrix(), {i - 1, kQubits - i}, out, kQubits);
    }
    return out;
}

CMatrix block(const CMatrix &rho, size_t a, size_t b) { return rho.block(a * kDataDim, b * kDataDim, kDataDim, kDataDim); }

double outcome_probability(const CMatrix &rho, size_t a) { return block(rho, a, a).trace().real(); }

size_t flip(size_t base, int i) { return base ^ (size_t{1} << (kAncillas - i)); }

bool single_flip_pattern(size_t a) { return std::popcount(a) == 1 || std::popcount(a) == 3; }

double fidelity(const CMatrix &rho, const CVector &psi) { return (psi.adjoint() * rho * psi)(0, 0).real(); }

// Joint state after perfect encoding and coupling; `ancilla` is the encoder output.
CMatrix encoded_and_coupled(const CMatrix &ancilla, const CVector &psi) {
    return couple(kron(ancilla, psi * psi.adjoint()));
}

CMatrix lossless_final(const CVector &psi) {
    CavityParams lossless;
    CMatrix anc = encode_with_cavity(ancilla_zero(), lossless);
    return conjugate(lossless_decoder(), ancilla_targets(), encoded_and_coupled(anc, psi), kQubits);
}

// Expected lossless output: |0000> P+ psi + i |1111> P- psi.
CMatrix expected_lossless_final(const CVector &psi) {
    CMatrix m = stabilizer_m();
    CMatrix id = CMatrix::Identity(kDataDim, kDataDim);
    CVector plus = (id + m) / 2.0 * psi;
    CVector minus = (id - m) / 2.0 * psi;
    CVector phi = CVector::Zero(size_t{1} << kQubits);
    phi.segment(0, kDataDim) = plus;
    phi.segment(15 * kDataDim, kDataDim) = cplx(0, 1) * minus;
    return phi * phi.adjoint();
}

CMatrix predicted_flip_block(const FlipBlock &fb, const CMatrix &sigma, double sign, double pe) {
    CMatrix left = data_x({fb.p}) + sign * data_x(fb.rest_i);
    CMatrix right = data_x({fb.q}) + sign * data_x(fb.rest_j);
    return (pe / 16.0) * left * sigma * right.adjoint();
}

std::array<int, 3> others(int p) {
    std::array<int, 3> out{};
    size_t k = 0;
    for (int x : {4, 5, 6, 7}) {
        if (x != p) {
            out[k++] = x;
        }
    }
    return out;
}

std::vector<FlipBlock> compute_flip_table(const CMatrix &flip_part, const CMatrix &sigma, double pe) {
    std::vector<FlipBlock> table;
    for (int i = 1; i <= 4; i++) {
        for (int j = 1; j <= 4; j++) {
            FlipBlock fb;
            fb.i = i;
            fb.j = j;
            fb.p = 8 - i;
            fb.q = 8 - j;
            fb.rest_i = others(fb.p);
            fb.rest_j = others(fb.q);
            double dev = 0;
            for (auto [base, sign] : {std::pair<size_t, double>{0, 1.0}, {15, -1.0}}) {
                CMatrix got = block(flip_part, flip(base, i), flip(base, j));
                dev = std::max(dev, max_abs(got - predicted_flip_block(fb, sigma, sign, pe)));
            }
            fb.deviation = dev;
            table.push_back(fb);
        }
    }
    return table;
}

}  // namespace

DenseState::DenseState(size_t q, CMatrix r) : qubits(q), rho(std::move(r)) {
    size_t dim = size_t{1} << q;
    if ((size_t)rho.rows() != dim || (size_t)rho.cols() != dim) {
        throw std::invalid_argument("density matrix dimension does not match the qubit count");
    }
}

DenseState DenseState::pure(const CVector &psi) {
    size_t q = (size_t)std::countr_zero((size_t)psi.size());
    if ((size_t{1} << q) != (size_t)psi.size()) {
        throw std::invalid_argument("state vector length is not a power of two");
    }
    return DenseState(q, psi * psi.adjoint());
}

void DenseState::validate(double tol) const {
    if (qubits > 12) {
        throw std::invalid_argument("dense states are limited to 12 qubits");
    }
    if (max_abs(rho - rho.adjoint()) > tol) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    double tr = trace();
    if (!(tr > 0 && tr <= 1 + tol)) {
        throw std::invalid_argument("density matrix trace outside (0, 1]");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) {
        throw std::invalid_argument("density matrix is not positive semidefinite");
    }
}

CMatrix pauli_string(std::string_view s) {
    CMatrix out = CMatrix::Identity(1, 1);
    for (char c : s) {
        out = kron(out, single_pauli(c));
    }
    return out;
}

CMatrix collective_x(size_t n) { return single_site_sum(n, 'X') / 2.0; }
CMatrix collective_y(size_t n) { return single_site_sum(n, 'Y') / -2.0; }
CMatrix collective_z(size_t n) { return single_site_sum(n, 'Z') / -2.0; }

CMatrix exp_i(const CMatrix &h, double t) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    CVector phases = (es.eigenvalues().cast<cplx>() * cplx(0, t)).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix apply_left(const CMatrix &op, const std::vector<size_t> &targets, const CMatrix &m, size_t qubits) {
    size_t k = targets.size();
    size_t sub = size_t{1} << k;
    size_t dim = size_t{1} << qubits;
    if ((size_t)op.rows() != sub || (size_t)op.cols() != sub || (size_t)m.rows() != dim) {
        throw std::invalid_argument("apply_left dimension mismatch");
    }
    std::vector<size_t> offs(sub, 0);
    size_t tmask = 0;
    for (size_t t = 0; t < k; t++) {
        if (targets[t] >= qubits) {
            throw std::invalid_argument("target qubit out of range");
        }
        size_t bit = size_t{1} << (qubits - 1 - targets[t]);
        if (tmask & bit) {
            throw std::invalid_argument("repeated target qubit");
        }
        tmask |= bit;
        for (size_t s = 0; s < sub; s++) {
            if ((s >> (k - 1 - t)) & 1) {
                offs[s] |= bit;
            }
        }
    }
    CMatrix out(m.rows(), m.cols());
    CVector v(sub);
    for (Eigen::Index col = 0; col < m.cols(); col++) {
        for (size_t base = 0; base < dim; base++) {
            if (base & tmask) {
                continue;
            }
            for (size_t s = 0; s < sub; s++) {
                v[s] = m(base | offs[s], col);
            }
            CVector w = op * v;
            for (size_t s = 0; s < sub; s++) {
                out(base | offs[s], col) = w[s];
            }
        }
    }
    return out;
}

CMatrix apply_right(const CMatrix &m, const CMatrix &op, const std::vector<size_t> &targets, size_t qubits) {
    CMatrix t = m.transpose();
    return apply_left(op.transpose(), targets, t, qubits).transpose();
}

CMatrix conjugate(const CMatrix &op, const std::vector<size_t> &targets, const CMatrix &rho, size_t qubits) {
    return apply_right(apply_left(op, targets, rho, qubits), op.adjoint(), targets, qubits);
}

double CavityParams::d_n() const { return 1.0 / std::sqrt(2.0 * (1.0 + std::ldexp(1.0, -(int)n))); }

double CavityParams::inv_sqrt_c() const { return std::isinf(cooperativity) ? 0.0 : 1.0 / std::sqrt(cooperativity); }

double CavityParams::alpha() const { return theta * inv_sqrt_c() / d_n(); }

void CavityParams::validate() const {
    if (n == 0 || n > 12) {
        throw std::invalid_argument("cavity map needs 1..12 qubits");
    }
    if (!(cooperativity > 0)) {
        throw std::invalid_argument("cooperativity must be positive");
    }
}

CMatrix dicke_basis(size_t n) {
    size_t dim = size_t{1} << n;
    CMatrix b = CMatrix::Zero(dim, n + 1);
    for (size_t x = 0; x < dim; x++) {
        b(x, std::popcount(x)) = 1;
    }
    for (size_t k = 0; k <= n; k++) {
        b.col(k).normalize();
    }
    return b;
}

CMatrix phase_map(const CMatrix &rho, const CavityParams &params) {
    params.validate();
    size_t n = params.n;
    size_t dim = size_t{1} << n;
    if ((size_t)rho.rows() != dim || (size_t)rho.cols() != dim) {
        throw std::invalid_argument("phase_map input has the wrong dimension");
    }
    CMatrix b = dicke_basis(n);
    CMatrix sym = b.adjoint() * rho * b;
    if (max_abs(rho - b * sym * b.adjoint()) > 1e-10) {
        throw std::invalid_argument("phase_map input has weight outside the symmetric subspace");
    }
    double nn = (double)n;
    double th = params.theta;
    double isc = params.inv_sqrt_c();
    double dn = params.d_n();
    for (size_t k = 0; k <= n; k++) {
        for (size_t kp = 0; kp <= n; kp++) {
            double m = (double)k - nn / 2, mp = (double)kp - nn / 2;
            double re = ((m * m - mp * mp) + (m - mp) * nn) * th;
            double im = (m - mp) * (m - mp) * th * isc / dn + (m + mp + nn) * th * dn * isc / 2;
            sym(k, kp) *= std::exp(cplx(-im, re));
        }
    }
    return b * sym * b.adjoint();
}

CMatrix encode_with_cavity(const CMatrix &rho, const CavityParams &params) {
    CMatrix r = exp_i(collective_y(params.n), -kHalfPi);
    return r.adjoint() * phase_map(r * rho * r.adjoint(), params) * r;
}

CMatrix first_order_expansion(const CMatrix &tau, const CavityParams &params, size_t qubits) {
    std::vector<size_t> targets(params.n);
    for (size_t q = 0; q < params.n; q++) {
        targets[q] = q;
    }
    CMatrix jx = collective_x(params.n);
    CMatrix jx2 = jx * jx;
    double a = params.alpha();
    CMatrix flips = apply_left(jx, targets, apply_right(tau, jx, targets, qubits), qubits);
    CMatrix both = apply_left(jx2, targets, tau, qubits) + apply_right(tau, jx2, targets, qubits);
    return tau + 2 * a * flips - a * both;
}

CMatrix first_order_map(const CMatrix &rho, const CavityParams &params) {
    CavityParams lossless = params;
    lossless.cooperativity = std::numeric_limits<double>::infinity();
    return first_order_expansion(encode_with_cavity(rho, lossless), params, params.n);
}

void VerifierReport::check(const std::string &what, double deviation, double tolerance) {
    checks.push_back(CheckResult{what, deviation, tolerance, std::isfinite(deviation) && deviation <= tolerance});
}

bool VerifierReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.passed; });
}

std::string to_string(SteaneCase c) {
    switch (c) {
        case SteaneCase::perfect_perfect:
            return "perfect_perfect";
        case SteaneCase::faulty_encode:
            return "faulty_encode";
        case SteaneCase::faulty_decode:
            return "faulty_decode";
    }
    return "?";
}

SteaneCase steane_case_from_string(const std::string &s) {
    for (auto c : {SteaneCase::perfect_perfect, SteaneCase::faulty_encode, SteaneCase::faulty_decode}) {
        if (to_string(c) == s) {
            return c;
        }
    }
    throw std::invalid_argument("unknown case: " + s);
}

namespace {

VerifierReport perfect_perfect(uint64_t seed) {
    VerifierReport r;
    r.name = to_string(SteaneCase::perfect_perfect);
    CVector psi = random_data_state(seed);
    CMatrix fin = lossless_final(psi);
    r.check("final state equals |0000>P+psi + i|1111>P-psi", max_abs(fin - expected_lossless_final(psi)), 1e-12);

    double stray = 0;
    for (size_t a = 1; a < 15; a++) {
        stray += std::abs(outcome_probability(fin, a));
    }
    r.check("only all-zero and all-one ancilla outcomes occur", stray, 1e-12);
    double expect_plus = ((psi.adjoint() * (CMatrix::Identity(kDataDim, kDataDim) + stabilizer_m()) * psi)(0, 0).real()) / 2;
    r.check("all-zero outcome probability equals <(I+M)/2>", std::abs(outcome_probability(fin, 0) - expect_plus), 1e-12);
    r.metrics["p_all_zero_random_data"] = outcome_probability(fin, 0);

    CVector eig = plus_eigenstate(seed);
    CMatrix fin_eig = lossless_final(eig);
    double p0 = outcome_probability(fin_eig, 0);
    r.check("+1 eigenstate: all-zero outcome is certain", std::abs(1 - p0), 1e-12);
    CMatrix cond = block(fin_eig, 0, 0) / p0;
    r.check("+1 eigenstate: data unchanged (1 - fidelity)", std::abs(1 - fidelity(cond, eig)), 1e-12);
    return r;
}

VerifierReport faulty_encode(double cooperativity, uint64_t seed) {
    VerifierReport r;
    r.name = to_string(SteaneCase::faulty_encode);
    CavityParams params;
    params.cooperativity = cooperativity;
    double pe = params.flip_weight();
    CMatrix dec = lossless_decoder();

    CVector psi = random_data_state(seed);
    CMatrix sigma = psi * psi.adjoint();
    CMatrix first = first_order_map(ancilla_zero(), params);
    CMatrix fin_first = conjugate(dec, ancilla_targets(), encoded_and_coupled(first, psi), kQubits);
    CMatrix flip_part = fin_first - lossless_final(psi);

    auto table = compute_flip_table(flip_part, sigma, pe);
    double worst = 0;
    for (const auto &fb : table) {
        worst = std::max(worst, fb.deviation);
    }
    r.check("16 single-flip blocks match (pe/16)(X_p +- X_abc) sigma (X_q +- X_def)", worst, 1e-12);

    // Pattern (-1,+1,+1,+1): first ancilla flipped, data qubit 7 implicated.
    CVector eig = plus_eigenstate(seed);
    CMatrix fin_eig = conjugate(dec, ancilla_targets(), encoded_and_coupled(first, eig), kQubits);
    size_t a = flip(0, 1);
    double pa = outcome_probability(fin_eig, a);
    CMatrix cond = block(fin_eig, a, a) / pa;
    CVector flipped = data_x({7}) * eig;
    r.check("outcome (-1,+1,+1,+1) leaves data in X7 |psi> (1 - fidelity)", std::abs(1 - fidelity(cond, flipped)), 1e-10);

    double single = 0;
    for (size_t x = 0; x < 16; x++) {
        if (single_flip_pattern(x)) {
            single += outcome_probability(fin_first, x);
        }
    }
    r.metrics["p_e"] = pe;
    r.metrics["first_order_single_flip_probability"] = single;
    r.metrics["first_order_flip_weight_over_p_e"] = single / pe;

    // Same pipeline with the exact cavity map.
    CMatrix exact = encode_with_cavity(ancilla_zero(), params);
    CMatrix fin_exact = conjugate(dec, ancilla_targets(), encoded_and_coupled(exact, psi), kQubits);
    double single_exact = 0;
    for (size_t x = 0; x < 16; x++) {
        if (single_flip_pattern(x)) {
            single_exact += outcome_probability(fin_exact, x);
        }
    }
    double tr_exact = fin_exact.trace().real();
    r.metrics["exact_trace"] = tr_exact;
    r.metrics["exact_single_flip_probability"] = single_exact / tr_exact;
    r.metrics["exact_flip_weight_over_p_e"] = single_exact / tr_exact / pe;
    return r;
}

VerifierReport faulty_decode(double cooperativity, uint64_t seed) {
    VerifierReport r;
    r.name = to_string(SteaneCase::faulty_decode);
    CavityParams params;
    params.cooperativity = cooperativity;
    double pe = params.flip_weight();
    double n = (double)params.n;

    CVector psi = random_data_state(seed);
    CMatrix v3 = lossless_final(psi);
    CMatrix fin = first_order_expansion(v3, params, kQubits);
    CMatrix jx = collective_x(kAncillas);
    CMatrix kicked = pe * apply_left(jx, ancilla_targets(), apply_right(v3, jx, ancilla_targets(), kQubits), kQubits);
    CMatrix predicted = v3 + kicked;

    double single_dev = 0, zero_dev = 0, zero_vs_plain = 0, stray_population = 0;
    for (size_t a = 0; a < 16; a++) {
        for (size_t b = 0; b < 16; b++) {
            double dev = max_abs(block(fin, a, b) - block(predicted, a, b));
            bool a0 = a == 0 || a == 15, b0 = b == 0 || b == 15;
            if (single_flip_pattern(a) && single_flip_pattern(b)) {
                single_dev = std::max(single_dev, dev);
            } else if (a0 && b0) {
                zero_vs_plain = std::max(zero_vs_plain, dev);
                zero_dev = std::max(zero_dev, max_abs(block(fin, a, b) - (1 - pe * n / 4) * block(v3, a, b)));
            }
        }
        if (!single_flip_pattern(a) && a != 0 && a != 15) {
            stray_population += std::abs(outcome_probability(fin, a));
        }
    }
    r.check("single-flip blocks equal those of v3 + pe (Jx x 1) v3 (Jx x 1)", single_dev, 1e-12);
    r.check("no-flip blocks equal (1 - pe N/4) v3", zero_dev, 1e-12);
    r.check("two-flip outcomes have zero probability at first order", stray_population, 1e-12);
    r.metrics["no_flip_block_deviation_from_v3_plus_kick"] = zero_vs_plain;

    CVector eig = plus_eigenstate(seed);
    CMatrix fin_eig = first_order_expansion(lossless_final(eig), params, kQubits);
    double worst = 0;
    for (int i = 1; i <= 4; i++) {
        size_t a = flip(0, i);
        CMatrix cond = block(fin_eig, a, a) / outcome_probability(fin_eig, a);
        worst = std::max(worst, std::abs(1 - fidelity(cond, eig)));
    }
    r.check("single-flip outcomes leave the data unchanged (1 - fidelity)", worst, 1e-10);

    double single = 0;
    for (size_t x = 0; x < 16; x++) {
        if (single_flip_pattern(x)) {
            single += outcome_probability(fin, x);
        }
    }
    r.metrics["p_e"] = pe;
    r.metrics["single_flip_probability"] = single;
    r.metrics["flip_weight_over_p_e"] = single / pe;
    return r;
}

}  // namespace

VerifierReport run_case(SteaneCase c, double cooperativity, uint64_t seed) {
    switch (c) {
        case SteaneCase::perfect_perfect:
            return perfect_perfect(seed);
        case SteaneCase::faulty_encode:
            return faulty_encode(cooperativity, seed);
        case SteaneCase::faulty_decode:
            return faulty_decode(cooperativity, seed);
    }
    throw std::invalid_argument("unknown case");
}

std::vector<FlipBlock> flip_block_table(double cooperativity, uint64_t seed) {
    CavityParams params;
    params.cooperativity = cooperativity;
    CVector psi = random_data_state(seed);
    CMatrix first = first_order_map(ancilla_zero(), params);
    CMatrix fin = conjugate(lossless_decoder(), ancilla_targets(), encoded_and_coupled(first, psi), kQubits);
    return compute_flip_table(fin - lossless_final(psi), psi * psi.adjoint(), params.flip_weight());
}

VerifierReport heisenberg_check() {
    VerifierReport r;
    r.name = "heisenberg";
    CMatrix jx = collective_x(4), jy = collective_y(4), jz = collective_z(4);
    CMatrix ud = exp_i(jx * jx, -kHalfPi);
    CMatrix ue = ud.adjoint();
    // Errors ahead of the decoder are read off as U_D^dagger P U_D.
    auto through = [&](const char *p) { return CMatrix(ud.adjoint() * pauli_string(p) * ud); };
    r.check("U_D^dag ZIII U_D = -YXXX", max_abs(through("ZIII") + pauli_string("YXXX")), 1e-12);
    r.check("U_D^dag YIII U_D = ZXXX", max_abs(through("YIII") - pauli_string("ZXXX")), 1e-12);
    r.check("U_D^dag XIII U_D = XIII", max_abs(through("XIII") - pauli_string("XIII")), 1e-12);
    r.check("U_D^dag IIII U_D = IIII", max_abs(through("IIII") - pauli_string("IIII")), 1e-12);
    double comm = 0;
    for (const char *p : {"XIII", "IXII", "IIXI", "IIIX"}) {
        CMatrix x = pauli_string(p);
        comm = std::max(comm, max_abs(ue * x - x * ue));
    }
    r.check("[U_E, X_i] = 0 for every ancilla", comm, 1e-12);
    CMatrix chain = exp_i(jy, kHalfPi) * exp_i(jz * jz, -kHalfPi) * exp_i(jy, -kHalfPi);
    r.check("exp(i pi/2 Jy) exp(-i pi/2 Jz^2) exp(-i pi/2 Jy) = exp(-i pi/2 Jx^2)", max_abs(chain - ud), 1e-12);
    // The opposite order does not hold; recorded so the convention is visible in reports.
    r.metrics["U_D ZIII U_D^dag + YXXX deviation"] = max_abs(ud * pauli_string("ZIII") * ud.adjoint() + pauli_string("YXXX"));
    return r;
}

VerifierReport ghz_merge_check() {
    VerifierReport r;
    r.name = "ghz_merge";
    const size_t n = 6;
    const size_t dim = size_t{1} << n;
    CVector cat3 = CVector::Zero(8);
    cat3[0] = cat3[7] = 1 / std::sqrt(2.0);
    CVector both(dim);
    for (size_t x = 0; x < dim; x++) {
        both[x] = cat3[x >> 3] * cat3[x & 7];
    }
    CVector ghz6 = CVector::Zero(dim);
    ghz6[0] = ghz6[dim - 1] = 1 / std::sqrt(2.0);
    // Qubits 0..2 are h1..h3, 3..5 are v1..v3; the parity measured is Z_h3 Z_v1.
    CMatrix zz = pauli_string("IIZZII");
    CMatrix id = CMatrix::Identity(dim, dim);
    const std::vector<uint32_t> vertical{3, 4, 5};

    double stab_worst = 0;
    for (int m = 0; m <= 1; m++) {
        CMatrix proj = (id + (m ? -1.0 : 1.0) * zz) / 2.0;
        CVector post = proj * both;
        double prob = post.squaredNorm();
        r.metrics["p_outcome_" + std::to_string(m)] = prob;
        post /= std::sqrt(prob);
        std::string corr(n, 'I');
        for (uint32_t q : merge_ghz_correction(m, vertical)) {
            corr[q] = 'X';
        }
        CVector fixed = pauli_string(corr) * post;
        double f = std::norm(ghz6.dot(fixed));
        r.check("outcome " + std::to_string(m) + " with correction: 1 - fidelity with GHZ6", std::abs(1 - f), 1e-12);
        if (m == 1) {
            double f_raw = std::norm(ghz6.dot(post));
            r.check("outcome 1 without correction: fidelity with GHZ6", f_raw, 1e-12);
            CVector branch = CVector::Zero(dim);
            branch[0b000111] = branch[0b111000] = 1 / std::sqrt(2.0);
            r.check("outcome 1 without correction: 1 - fidelity with flipped branch",
                    std::abs(1 - std::norm(branch.dot(post))), 1e-12);
        }
        std::vector<std::string> stabs{"XXXXXX"};
        for (size_t q = 0; q + 1 < n; q++) {
            std::string s(n, 'I');
            s[q] = s[q + 1] = 'Z';
            stabs.push_back(s);
        }
        for (const auto &s : stabs) {
            stab_worst = std::max(stab_worst, (pauli_string(s) * fixed - fixed).cwiseAbs().maxCoeff());
        }
    }
    r.check("merged state stabilized by XXXXXX and adjacent ZZ", stab_worst, 1e-12);
    return r;
}

VerifierReport cavity_map_check(double cooperativity) {
    VerifierReport r;
    r.name = "cavity_map";
    CavityParams lossless;
    CavityParams lossy;
    lossy.cooperativity = cooperativity;
    const size_t n = lossless.n;
    const size_t dim = size_t{1} << n;
    CMatrix jx = collective_x(n), jy = collective_y(n), jz = collective_z(n);

    CVector plus = CVector::Constant(dim, 1.0 / std::sqrt((double)dim));
    CMatrix rho_plus = plus * plus.adjoint();
    CMatrix out = phase_map(rho_plus, lossless);
    CVector target = exp_i(jz * jz, kHalfPi) * plus;
    r.check("lossless map on |+>^4 equals exp(+i pi/2 Jz^2)|+>^4", max_abs(out - target * target.adjoint()), 1e-12);
    r.check("lossless map preserves trace", std::abs(out.trace().real() - 1), 1e-12);

    CMatrix b = dicke_basis(n);
    CMatrix mix = CMatrix::Zero(dim, dim);
    for (size_t k = 0; k <= n; k++) {
        mix += (1.0 / (double)(n + 1)) * b.col(k) * b.col(k).adjoint();
    }
    CMatrix damped = b.adjoint() * phase_map(mix, lossy) * b;
    double diag_dev = 0;
    for (size_t k = 0; k <= n; k++) {
        double m = (double)k - (double)n / 2;
        double factor = std::exp(-(2 * m + (double)n) * lossy.theta * lossy.d_n() * lossy.inv_sqrt_c() / 2);
        diag_dev = std::max(diag_dev, std::abs(damped(k, k) - factor / (double)(n + 1)));
    }
    r.check("diagonal elements damped by exp(-(2m+N) theta d_N / (2 sqrt C)), no phase", diag_dev, 1e-12);
    r.check("finite cooperativity does not increase trace",
            std::max(0.0, phase_map(rho_plus, lossy).trace().real() - 1), 1e-12);

    CMatrix zero = CMatrix::Zero(dim, dim);
    zero(0, 0) = 1;
    CVector cat = CVector::Zero(dim);
    cat[0] = cplx(0, 1) / std::sqrt(2.0);
    cat[dim - 1] = 1 / std::sqrt(2.0);
    CMatrix enc = encode_with_cavity(zero, lossless);
    r.check("encoder on |0000> gives (i|0000> + |1111>)/sqrt2 (1 - fidelity)", std::abs(1 - fidelity(enc, cat)), 1e-12);

    CMatrix chain = exp_i(jy, kHalfPi) * exp_i(jz * jz, -kHalfPi) * exp_i(jy, -kHalfPi);
    r.check("encoder identity as 16x16 matrices", max_abs(chain - exp_i(jx * jx, -kHalfPi)), 1e-12);

    bool rejected = false;
    CMatrix asym = CMatrix::Zero(dim, dim);
    asym(1, 1) = 1;
    try {
        phase_map(asym, lossless);
    } catch (const std::invalid_argument &) {
        rejected = true;
    }
    r.check("non-symmetric input rejected", rejected ? 0.0 : 1.0, 0.0);

    r.check("first-order map at C = inf is the lossless encoder", max_abs(first_order_map(zero, lossless) - enc), 1e-12);

    CMatrix tau = enc;
    CMatrix jx2 = jx * jx;
    CMatrix j2 = jx2 + jy * jy + jz * jz;
    CMatrix lhs = jx2 * tau + tau * jx2;
    CMatrix perp = j2 - jz * jz;
    CMatrix rhs = (perp * tau + tau * perp) / 2.0;
    double jdev = (lhs.diagonal() - rhs.diagonal()).cwiseAbs().maxCoeff();
    double scale_dev = (lhs.diagonal() - 2.0 * tau.diagonal()).cwiseAbs().maxCoeff();
    r.check("diag(Jx^2 tau + tau Jx^2) = diag of the (J^2 - Jz^2) terms on the cat", jdev, 1e-12);
    r.check("that diagonal is 2 diag(tau), i.e. the cat populations are only rescaled", scale_dev, 1e-12);

    // Normalized populations of the exact and first-order encoders differ at O(1/C).
    std::vector<double> grid{1e4, 1e5, 1e6};
    std::vector<double> gaps;
    for (double c : grid) {
        CavityParams p;
        p.cooperativity = c;
        CMatrix ex = encode_with_cavity(zero, p);
        CMatrix fo = first_order_map(zero, p);
        Eigen::VectorXd pe = ex.diagonal().real() / ex.trace().real();
        Eigen::VectorXd pf = fo.diagonal().real() / fo.trace().real();
        double gap = (pe - pf).cwiseAbs().maxCoeff();
        gaps.push_back(gap);
        r.metrics["population_gap_C_" + std::to_string((int)std::lround(std::log10(c)))] = gap;
    }
    double worst_ratio_dev = 0;
    for (size_t i = 0; i + 1 < gaps.size(); i++) {
        double ratio = gaps[i + 1] / gaps[i];
        worst_ratio_dev = std::max(worst_ratio_dev, std::abs(std::log10(ratio) + 1));
    }
    r.check("population gap shrinks by 10x per decade of C (|log10 ratio + 1|)", worst_ratio_dev, 0.1);
    return r;
}

}  // namespace cavqec
