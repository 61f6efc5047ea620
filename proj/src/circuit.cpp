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

#include "cavqec/circuit.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cavqec/sim.hpp"

namespace cavqec {

namespace {

constexpr std::array<std::string_view, 18> kNames = {
    "RESET_Z", "RESET_X", "H",         "CNOT",      "CZ",       "PAULI_X",   "PAULI_Y",            "PAULI_Z", "MEASURE_Z",
    "DEPOL1",  "DEPOL2",  "X_ERROR",   "MEAS_FLIP", "ONE_HOT_X", "CAT_PREP", "DETECTOR", "OBSERVABLE_INCLUDE", "TICK",
};

bool has_probability(Op op) { return is_noise(op); }

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string_view op_name(Op op) { return kNames[(size_t)op]; }

bool is_noise(Op op) {
    return op == Op::DEPOL1 || op == Op::DEPOL2 || op == Op::X_ERROR || op == Op::MEAS_FLIP || op == Op::ONE_HOT_X;
}

bool is_two_qubit(Op op) { return op == Op::CNOT || op == Op::CZ || op == Op::DEPOL2; }

void Circuit::append(Instruction inst) {
    if (has_probability(inst.op) && !(inst.p >= 0 && inst.p <= 1)) {
        throw std::invalid_argument(std::string(op_name(inst.op)) + " probability outside [0,1]");
    }
    if (is_two_qubit(inst.op)) {
        if (inst.targets.size() % 2) {
            throw std::invalid_argument(std::string(op_name(inst.op)) + " needs an even number of targets");
        }
        for (size_t k = 0; k < inst.targets.size(); k += 2) {
            if (inst.targets[k] == inst.targets[k + 1]) {
                throw std::invalid_argument("two-qubit gate on a single qubit");
            }
        }
    }
    if (inst.op == Op::ONE_HOT_X) {
        one_hot_stage_probabilities(inst.targets.size(), inst.p);
    }
    if (inst.op == Op::DETECTOR || inst.op == Op::OBSERVABLE) {
        for (uint32_t k : inst.refs) {
            if (k == 0 || k > measurement_count) {
                throw std::invalid_argument("measurement reference out of range");
            }
        }
    }
    for (uint32_t q : inst.targets) {
        qubit_count = std::max(qubit_count, (size_t)q + 1);
    }
    switch (inst.op) {
        case Op::MEASURE_Z:
            measurement_count += inst.targets.size();
            break;
        case Op::DETECTOR:
            detector_count++;
            if (detector_tags.size() < detector_count) {
                detector_tags.resize(detector_count);
            }
            break;
        case Op::OBSERVABLE:
            observable_count = std::max(observable_count, (size_t)inst.id + 1);
            break;
        default:
            break;
    }
    instructions.push_back(std::move(inst));
}

void Circuit::append(Op op, std::vector<uint32_t> targets, double p) {
    Instruction inst;
    inst.op = op;
    inst.p = p;
    inst.targets = std::move(targets);
    append(std::move(inst));
}

void Circuit::detector(const std::vector<uint32_t> &absolute_measurements, DetectorTag tag) {
    Instruction inst;
    inst.op = Op::DETECTOR;
    for (uint32_t m : absolute_measurements) {
        inst.refs.push_back((uint32_t)(measurement_count - m));
    }
    append(std::move(inst));
    detector_tags.back() = tag;
}

void Circuit::observable(uint32_t id, const std::vector<uint32_t> &absolute_measurements) {
    Instruction inst;
    inst.op = Op::OBSERVABLE;
    inst.id = id;
    for (uint32_t m : absolute_measurements) {
        inst.refs.push_back((uint32_t)(measurement_count - m));
    }
    append(std::move(inst));
}

size_t Circuit::count(Op op) const {
    return (size_t)std::count_if(instructions.begin(), instructions.end(), [&](const Instruction &i) { return i.op == op; });
}

std::string Circuit::str() const {
    std::ostringstream out;
    for (const Instruction &inst : instructions) {
        out << op_name(inst.op);
        if (has_probability(inst.op)) {
            out << "(" << format_double(inst.p) << ")";
        } else if (inst.op == Op::OBSERVABLE) {
            out << "(" << inst.id << ")";
        }
        for (uint32_t t : inst.targets) {
            out << " " << t;
        }
        for (uint32_t k : inst.refs) {
            out << " rec[-" << k << "]";
        }
        out << "\n";
    }
    return out.str();
}

Circuit Circuit::parse(std::string_view text) {
    Circuit c;
    std::istringstream in{std::string(text)};
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) {
            continue;
        }
        std::string name = head;
        std::string arg;
        auto paren = head.find('(');
        if (paren != std::string::npos) {
            if (head.back() != ')') {
                throw std::invalid_argument("line " + std::to_string(lineno) + ": malformed argument");
            }
            name = head.substr(0, paren);
            arg = head.substr(paren + 1, head.size() - paren - 2);
        }
        auto it = std::find(kNames.begin(), kNames.end(), name);
        if (it == kNames.end()) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown instruction " + name);
        }
        Instruction inst;
        inst.op = (Op)(it - kNames.begin());
        if (has_probability(inst.op)) {
            auto res = std::from_chars(arg.data(), arg.data() + arg.size(), inst.p);
            if (arg.empty() || res.ec != std::errc()) {
                throw std::invalid_argument("line " + std::to_string(lineno) + ": bad probability");
            }
        } else if (inst.op == Op::OBSERVABLE) {
            inst.id = (uint32_t)std::stoul(arg);
        }
        std::string tok;
        while (ls >> tok) {
            if (tok.rfind("rec[-", 0) == 0 && tok.back() == ']') {
                inst.refs.push_back((uint32_t)std::stoul(tok.substr(5, tok.size() - 6)));
            } else {
                inst.targets.push_back((uint32_t)std::stoul(tok));
            }
        }
        c.append(std::move(inst));
    }
    return c;
}

ModelKind model_from_string(const std::string &s) {
    if (s == "agnostic") {
        return ModelKind::agnostic;
    }
    if (s == "custom") {
        return ModelKind::custom;
    }
    throw std::invalid_argument("unknown noise model '" + s + "'");
}

std::string to_string(ModelKind k) { return k == ModelKind::agnostic ? "agnostic" : "custom"; }

NoiseModel make_noise_model(ModelKind kind, double p, double m) {
    if (!(p >= 0 && p <= 1) || !(m >= 0) || !(m * p <= 1)) {
        throw std::invalid_argument("noise parameters out of range");
    }
    NoiseModel nm;
    if (kind == ModelKind::agnostic) {
        nm.p1 = nm.p2 = nm.p_in = nm.p_meas = p;
    } else {
        nm.p2 = p;
        nm.p1 = p / 10;
        nm.p_in = nm.p_meas = 2 * p;
        if (nm.p_in > 1) {
            throw std::invalid_argument("custom model needs 2p <= 1");
        }
    }
    nm.p_wait = 0;
    nm.p_cavity = m * p;
    return nm;
}

std::vector<double> one_hot_stage_probabilities(size_t n, double p) {
    if (n == 0) {
        throw std::invalid_argument("one-hot channel needs at least one qubit");
    }
    std::vector<double> stages;
    for (size_t k = 0; k < n; k++) {
        double q = p / ((double)n - (double)k * p);
        if (!(q >= 0 && q <= 1)) {
            throw std::invalid_argument("one-hot stage probability outside [0,1]");
        }
        stages.push_back(q);
    }
    return stages;
}

std::vector<Instruction> one_hot_x_channel(const std::vector<uint32_t> &qubits, double p) {
    one_hot_stage_probabilities(qubits.size(), p);
    Instruction inst;
    inst.op = qubits.size() == 1 ? Op::X_ERROR : Op::ONE_HOT_X;
    inst.p = p;
    inst.targets = qubits;
    return {inst};
}

namespace {

void noisy(Circuit &c, Op op, const std::vector<uint32_t> &targets, double p) {
    if (p > 0 && !targets.empty()) {
        c.append(op, targets, p);
    }
}

void one_hot(Circuit &c, const std::vector<uint32_t> &qubits, double p) {
    if (p > 0) {
        for (auto &inst : one_hot_x_channel(qubits, p)) {
            c.append(std::move(inst));
        }
    }
}

// H on the head, then a fan-out CNOT from the head to every other qubit.
void star(Circuit &c, const std::vector<uint32_t> &q, double p1, double p2_tree, bool head_h_first) {
    std::vector<uint32_t> pairs;
    for (size_t j = 1; j < q.size(); j++) {
        pairs.push_back(q[0]);
        pairs.push_back(q[j]);
    }
    auto hadamard = [&] {
        c.append(Op::H, {q[0]});
        noisy(c, Op::DEPOL1, {q[0]}, p1);
    };
    if (head_h_first) {
        hadamard();
    }
    if (!pairs.empty()) {
        c.append(Op::CNOT, pairs);
        noisy(c, Op::DEPOL2, pairs, p2_tree);
    }
    if (!head_h_first) {
        hadamard();
    }
}

}  // namespace

DaRoundRecord append_da_round(Circuit &c, PauliType type, const DaRoundQubits &q, const NoiseModel &noise,
                              const DaOptions &opt, DetectorTag tag) {
    size_t w = q.data.size();
    if (w == 0 || q.primary.size() != w || q.redundant.size() != w) {
        throw std::invalid_argument("DA round needs matching data, primary and redundant qubit lists");
    }
    std::vector<uint32_t> anc = q.primary;
    anc.insert(anc.end(), q.redundant.begin(), q.redundant.end());

    c.append(Op::RESET_Z, anc);
    noisy(c, Op::X_ERROR, anc, noise.p_in);

    // Cat encoding through the cavity: a Clifford stand-in plus the one-hot channel.
    star(c, q.primary, noise.p1, 0, true);
    one_hot(c, q.primary, noise.p_cavity);

    std::vector<uint32_t> coupling;
    for (size_t i = 0; i < w; i++) {
        coupling.push_back(q.primary[i]);
        coupling.push_back(q.data[i]);
    }
    c.append(type == PauliType::X ? Op::CNOT : Op::CZ, coupling);
    noisy(c, Op::DEPOL2, coupling, noise.p2);

    // Copy onto the redundified set, prepared in |+>.
    c.append(Op::H, q.redundant);
    noisy(c, Op::DEPOL1, q.redundant, noise.p1);
    std::vector<uint32_t> copy;
    for (size_t i = 0; i < w; i++) {
        copy.push_back(q.redundant[i]);
        copy.push_back(q.primary[i]);
    }
    c.append(Op::CNOT, copy);
    noisy(c, Op::DEPOL2, copy, noise.p2);

    // Primary decode goes through the cavity again; the redundified decode is local.
    star(c, q.primary, noise.p1, 0, false);
    one_hot(c, q.primary, noise.p_cavity);
    star(c, q.redundant, noise.p1, noise.p2, false);

    noisy(c, Op::MEAS_FLIP, anc, noise.p_meas);
    size_t base = c.measurement_count;
    c.append(Op::MEASURE_Z, anc);

    DaRoundRecord rec;
    for (size_t i = 0; i < w; i++) {
        rec.primary.push_back((uint32_t)(base + i));
        rec.redundant.push_back((uint32_t)(base + w + i));
    }
    if (opt.local_detectors) {
        tag.kind = DetectorKind::local;
        if (opt.per_qubit_local) {
            for (size_t i = 0; i < w; i++) {
                c.detector({rec.primary[i], rec.redundant[i]}, tag);
            }
        } else {
            std::vector<uint32_t> all = rec.primary;
            all.insert(all.end(), rec.redundant.begin(), rec.redundant.end());
            c.detector(all, tag);
        }
    }
    return rec;
}

Circuit build_da_round(const CssCode &code, PauliType type, size_t check_index, const NoiseModel &noise,
                       const DaOptions &opt) {
    const BitMatrix &m = code.checks(type);
    if (check_index >= m.rows) {
        throw std::out_of_range("check index out of range");
    }
    DaRoundQubits q;
    q.data = m.row_supports[check_index];
    size_t w = q.data.size();
    for (size_t i = 0; i < w; i++) {
        q.primary.push_back((uint32_t)(code.n + i));
        q.redundant.push_back((uint32_t)(code.n + w + i));
    }
    Circuit c;
    c.qubit_count = code.n + 2 * w;
    append_da_round(c, type, q, noise, opt, {DetectorKind::local, {type, (uint32_t)check_index}, 0});
    return c;
}

namespace {

Circuit without_detectors(const Circuit &src, const std::vector<uint32_t> &drop) {
    std::set<uint32_t> dropped(drop.begin(), drop.end());
    Circuit out;
    out.qubit_count = src.qubit_count;
    size_t d = 0;
    for (const Instruction &inst : src.instructions) {
        if (inst.op == Op::DETECTOR) {
            size_t idx = d++;
            if (dropped.count((uint32_t)idx)) {
                continue;
            }
            out.append(inst);
            out.detector_tags.back() = src.detector_tags[idx];
            continue;
        }
        out.append(inst);
    }
    out.pruned_detectors = src.pruned_detectors + dropped.size();
    return out;
}

}  // namespace

Circuit build_memory_experiment(const CssCode &code, size_t rounds, const NoiseModel &noise, const Schedule &schedule,
                                const MemoryOptions &opt) {
    if (rounds == 0) {
        throw std::invalid_argument("memory experiment needs at least one round");
    }
    size_t n = code.n;
    // Ancilla blocks: Z checks first, then X checks; primary set then redundified set.
    std::vector<DaRoundQubits> zq(code.g_z.rows), xq(code.g_x.rows);
    uint32_t next = (uint32_t)n;
    for (PauliType t : {PauliType::Z, PauliType::X}) {
        const BitMatrix &m = code.checks(t);
        auto &qs = t == PauliType::Z ? zq : xq;
        for (size_t r = 0; r < m.rows; r++) {
            qs[r].data = m.row_supports[r];
            for (size_t i = 0; i < qs[r].data.size(); i++) {
                qs[r].primary.push_back(next++);
            }
            for (size_t i = 0; i < qs[r].data.size(); i++) {
                qs[r].redundant.push_back(next++);
            }
        }
    }

    Circuit c;
    c.qubit_count = next;
    std::vector<uint32_t> data(n);
    for (size_t i = 0; i < n; i++) {
        data[i] = (uint32_t)i;
    }
    c.append(Op::RESET_Z, data);
    noisy(c, Op::X_ERROR, data, noise.p_in);

    std::vector<int64_t> last_z(code.g_z.rows, -1), last_x(code.g_x.rows, -1);
    DaOptions da;
    da.per_qubit_local = opt.per_qubit_local;
    for (size_t round = 0; round < rounds; round++) {
        for (const Timestep &ts : schedule.timesteps) {
            if (ts.checks.empty()) {
                continue;
            }
            std::vector<std::pair<CheckRef, uint32_t>> syndrome_bits;
            for (const CheckRef &ch : ts.checks) {
                auto &qs = ch.type == PauliType::Z ? zq : xq;
                if (ch.index >= qs.size() || qs[ch.index].data.empty()) {
                    continue;
                }
                auto rec = append_da_round(c, ch.type, qs[ch.index], noise, da, {DetectorKind::local, ch, (uint32_t)round});
                syndrome_bits.push_back({ch, rec.primary[0]});
            }
            for (auto [ch, bit] : syndrome_bits) {
                auto &last = ch.type == PauliType::Z ? last_z : last_x;
                std::vector<uint32_t> refs{bit};
                if (last[ch.index] >= 0) {
                    refs.push_back((uint32_t)last[ch.index]);
                }
                // Round-zero X detectors are random and get pruned below.
                c.detector(refs, {DetectorKind::time, ch, (uint32_t)round});
                last[ch.index] = bit;
            }
            c.tick();
        }
    }

    noisy(c, Op::MEAS_FLIP, data, noise.p_meas);
    size_t base = c.measurement_count;
    c.append(Op::MEASURE_Z, data);
    if (opt.final_detectors) {
        for (size_t r = 0; r < code.g_z.rows; r++) {
            std::vector<uint32_t> refs;
            for (uint32_t q : code.g_z.row_supports[r]) {
                refs.push_back((uint32_t)(base + q));
            }
            if (last_z[r] >= 0) {
                refs.push_back((uint32_t)last_z[r]);
            }
            c.detector(refs, {DetectorKind::final, {PauliType::Z, (uint32_t)r}, (uint32_t)rounds});
        }
    }
    if (code_parameters(code).k > 0) {
        LogicalBasis lb = logical_operators(code);
        for (size_t k = 0; k < lb.logical_z.rows; k++) {
            std::vector<uint32_t> refs;
            for (uint32_t q : lb.logical_z.row_supports[k]) {
                refs.push_back((uint32_t)(base + q));
            }
            c.observable((uint32_t)k, refs);
        }
    }

    auto random = nondeterministic_detectors(c);
    if (!nondeterministic_observables(c).empty()) {
        throw std::logic_error("memory experiment has a random observable");
    }
    return random.empty() ? c : without_detectors(c, random);
}

}  // namespace cavqec
