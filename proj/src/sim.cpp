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

#include "cavqec/sim.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cavqec/packed.hpp"

namespace cavqec {

Pauli Pauli::from_string(std::string_view s) {
    Pauli p(s.size());
    for (size_t i = 0; i < s.size(); i++) {
        switch (s[i]) {
            case 'I':
            case '_':
                break;
            case 'X':
                p.x[i] = 1;
                break;
            case 'Z':
                p.z[i] = 1;
                break;
            case 'Y':
                p.x[i] = p.z[i] = 1;
                break;
            default:
                throw std::invalid_argument("bad Pauli character");
        }
    }
    return p;
}

std::string Pauli::str() const {
    std::string s(x.size(), 'I');
    for (size_t i = 0; i < x.size(); i++) {
        s[i] = "IXZY"[x[i] | (z[i] << 1)];
    }
    return s;
}

Pauli propagate_pauli(const Pauli &in, const Instruction &inst) {
    Pauli p = in;
    const auto &t = inst.targets;
    for (uint32_t q : t) {
        if (q >= p.x.size()) {
            throw std::out_of_range("Pauli shorter than instruction targets");
        }
    }
    switch (inst.op) {
        case Op::H:
            for (uint32_t q : t) {
                std::swap(p.x[q], p.z[q]);
            }
            break;
        case Op::CNOT:
            for (size_t k = 0; k < t.size(); k += 2) {
                p.x[t[k + 1]] ^= p.x[t[k]];
                p.z[t[k]] ^= p.z[t[k + 1]];
            }
            break;
        case Op::CZ:
            for (size_t k = 0; k < t.size(); k += 2) {
                p.z[t[k + 1]] ^= p.x[t[k]];
                p.z[t[k]] ^= p.x[t[k + 1]];
            }
            break;
        case Op::CAT_PREP:
            if (!t.empty()) {
                std::swap(p.x[t[0]], p.z[t[0]]);
                for (size_t j = 1; j < t.size(); j++) {
                    p.x[t[j]] ^= p.x[t[0]];
                    p.z[t[0]] ^= p.z[t[j]];
                }
            }
            break;
        case Op::PAULI_X:
        case Op::PAULI_Y:
        case Op::PAULI_Z:
        case Op::TICK:
            break;
        default:
            throw std::invalid_argument(std::string(op_name(inst.op)) + " is not a Clifford gate");
    }
    return p;
}

SampleBatch::SampleBatch(size_t shots_, size_t dets, size_t obs_, uint64_t seed_)
    : shots(shots_),
      detectors(dets),
      observables(obs_),
      seed(seed_),
      det_words(words_for(dets)),
      obs_words(words_for(obs_)),
      det(shots_ * det_words, 0),
      obs(shots_ * obs_words, 0) {}

namespace {

// A fault injected into one lane of a 64-wide frame sweep. `code` is the Pauli on the
// slot: bit 0 = X, bit 1 = Z, and for DEPOL2 the low two bits hit the first qubit of the
// pair and the high two bits the second.
struct Event {
    uint32_t instr;
    uint32_t slot;
    uint8_t code;
    uint8_t lane;
};

void apply_event(const Instruction &inst, const Event &e, std::vector<uint64_t> &x, std::vector<uint64_t> &z,
                 std::vector<uint64_t> &flip) {
    uint64_t bit = uint64_t{1} << e.lane;
    auto hit = [&](uint32_t q, uint8_t code) {
        if (code & 1) {
            x[q] ^= bit;
        }
        if (code & 2) {
            z[q] ^= bit;
        }
    };
    switch (inst.op) {
        case Op::X_ERROR:
        case Op::ONE_HOT_X:
            x[inst.targets[e.slot]] ^= bit;
            break;
        case Op::DEPOL1:
            hit(inst.targets[e.slot], e.code);
            break;
        case Op::DEPOL2:
            hit(inst.targets[2 * e.slot], e.code & 3);
            hit(inst.targets[2 * e.slot + 1], e.code >> 2);
            break;
        case Op::MEAS_FLIP:
            flip[inst.targets[e.slot]] ^= bit;
            break;
        default:
            break;
    }
}

// Sweeps 64 frames through the circuit. `events` must be sorted by instruction. With a
// gauge generator, Z (X) frames are randomized wherever the state is a Z (X) eigenstate,
// which exposes measurements whose noiseless outcome is random.
void run_lanes(const Circuit &c, const std::vector<Event> &events, std::mt19937_64 *gauge, std::vector<uint64_t> &det,
               std::vector<uint64_t> &obs) {
    size_t nq = c.qubit_count;
    std::vector<uint64_t> x(nq, 0), z(nq, 0), flip(nq, 0), meas(c.measurement_count, 0);
    if (gauge) {
        for (auto &w : z) {
            w = (*gauge)();
        }
    }
    det.assign(c.detector_count, 0);
    obs.assign(c.observable_count, 0);
    size_t m = 0;
    size_t d = 0;
    size_t ev = 0;
    for (size_t i = 0; i < c.instructions.size(); i++) {
        const Instruction &inst = c.instructions[i];
        const auto &t = inst.targets;
        switch (inst.op) {
            case Op::RESET_Z:
                for (uint32_t q : t) {
                    x[q] = 0;
                    z[q] = gauge ? (*gauge)() : 0;
                }
                break;
            case Op::RESET_X:
                for (uint32_t q : t) {
                    x[q] = gauge ? (*gauge)() : 0;
                    z[q] = 0;
                }
                break;
            case Op::H:
                for (uint32_t q : t) {
                    std::swap(x[q], z[q]);
                }
                break;
            case Op::CNOT:
                for (size_t k = 0; k < t.size(); k += 2) {
                    x[t[k + 1]] ^= x[t[k]];
                    z[t[k]] ^= z[t[k + 1]];
                }
                break;
            case Op::CZ:
                for (size_t k = 0; k < t.size(); k += 2) {
                    z[t[k + 1]] ^= x[t[k]];
                    z[t[k]] ^= x[t[k + 1]];
                }
                break;
            case Op::CAT_PREP:
                if (!t.empty()) {
                    std::swap(x[t[0]], z[t[0]]);
                    for (size_t j = 1; j < t.size(); j++) {
                        x[t[j]] ^= x[t[0]];
                        z[t[0]] ^= z[t[j]];
                    }
                }
                break;
            case Op::PAULI_X:
                for (uint32_t q : t) {
                    x[q] = ~x[q];
                }
                break;
            case Op::PAULI_Y:
                for (uint32_t q : t) {
                    x[q] = ~x[q];
                    z[q] = ~z[q];
                }
                break;
            case Op::PAULI_Z:
                for (uint32_t q : t) {
                    z[q] = ~z[q];
                }
                break;
            case Op::MEASURE_Z:
                for (uint32_t q : t) {
                    meas[m++] = x[q] ^ flip[q];
                    flip[q] = 0;
                    if (gauge) {
                        z[q] = (*gauge)();
                    }
                }
                break;
            case Op::DETECTOR: {
                uint64_t w = 0;
                for (uint32_t k : inst.refs) {
                    w ^= meas[m - k];
                }
                det[d++] = w;
                break;
            }
            case Op::OBSERVABLE:
                for (uint32_t k : inst.refs) {
                    obs[inst.id] ^= meas[m - k];
                }
                break;
            case Op::TICK:
                break;
            default:
                while (ev < events.size() && events[ev].instr == i) {
                    apply_event(inst, events[ev++], x, z, flip);
                }
                break;
        }
    }
}

std::vector<uint32_t> nonzero_indices(const std::vector<uint64_t> &v) {
    std::vector<uint32_t> out;
    for (size_t i = 0; i < v.size(); i++) {
        if (v[i]) {
            out.push_back((uint32_t)i);
        }
    }
    return out;
}

// An elementary fault location. ONE_HOT_X appears once per instruction with its total
// probability; the flipped qubit is drawn when it fires.
struct Site {
    uint32_t instr;
    uint32_t slot;
    uint8_t code;
};

constexpr uint8_t kOneHot = 0xFF;

struct SiteGroup {
    double p;
    double log1m;
    std::vector<Site> sites;
};

std::vector<SiteGroup> collect_sites(const Circuit &c) {
    std::map<double, std::vector<Site>> by_p;
    for (size_t i = 0; i < c.instructions.size(); i++) {
        const Instruction &inst = c.instructions[i];
        if (!is_noise(inst.op) || inst.p <= 0) {
            continue;
        }
        uint32_t n = (uint32_t)inst.targets.size();
        switch (inst.op) {
            case Op::X_ERROR:
            case Op::MEAS_FLIP:
                for (uint32_t s = 0; s < n; s++) {
                    by_p[inst.p].push_back({(uint32_t)i, s, 1});
                }
                break;
            case Op::DEPOL1:
                for (uint32_t s = 0; s < n; s++) {
                    for (uint8_t code = 1; code <= 3; code++) {
                        by_p[inst.p / 3].push_back({(uint32_t)i, s, code});
                    }
                }
                break;
            case Op::DEPOL2:
                for (uint32_t s = 0; s < n / 2; s++) {
                    for (uint8_t code = 1; code <= 15; code++) {
                        by_p[inst.p / 15].push_back({(uint32_t)i, s, code});
                    }
                }
                break;
            case Op::ONE_HOT_X:
                by_p[inst.p].push_back({(uint32_t)i, 0, kOneHot});
                break;
            default:
                break;
        }
    }
    std::vector<SiteGroup> groups;
    for (auto &[p, sites] : by_p) {
        groups.push_back({p, std::log1p(-std::min(p, 1.0)), std::move(sites)});
    }
    return groups;
}

uint64_t shot_key(uint64_t seed, uint64_t shot) {
    // splitmix64 finalizer over the pair, so nearby (seed, shot) keys decorrelate.
    uint64_t z = seed * 0x9E3779B97F4A7C15ULL + shot + 0x632BE59BD9B4E019ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform_open(std::mt19937_64 &rng) {
    // (0, 1], so log() below is finite.
    return (double)((rng() >> 11) + 1) * 0x1.0p-53;
}

void draw_shot(const Circuit &c, const std::vector<SiteGroup> &groups, uint64_t seed, uint64_t shot, uint8_t lane,
               std::vector<Event> &out) {
    std::mt19937_64 rng(shot_key(seed, shot));
    for (const SiteGroup &g : groups) {
        double size = (double)g.sites.size();
        double pos = -1;
        while (true) {
            if (g.p >= 1) {
                pos += 1;
            } else {
                pos += 1 + std::floor(std::log(uniform_open(rng)) / g.log1m);
            }
            if (pos >= size) {
                break;
            }
            const Site &s = g.sites[(size_t)pos];
            if (s.code == kOneHot) {
                size_t n = c.instructions[s.instr].targets.size();
                auto slot = (uint32_t)std::min<double>((double)n - 1, std::floor(uniform_open(rng) * (double)n));
                out.push_back({s.instr, slot, 1, lane});
            } else {
                out.push_back({s.instr, s.slot, s.code, lane});
            }
        }
    }
}

void check_deterministic(const Circuit &c) {
    if (!nondeterministic_detectors(c).empty() || !nondeterministic_observables(c).empty()) {
        throw std::invalid_argument("circuit has detectors or observables that are random without noise");
    }
}

}  // namespace

std::vector<uint32_t> nondeterministic_detectors(const Circuit &c) {
    std::mt19937_64 gauge(0xC0FFEE);
    std::vector<uint64_t> det, obs;
    run_lanes(c, {}, &gauge, det, obs);
    return nonzero_indices(det);
}

std::vector<uint32_t> nondeterministic_observables(const Circuit &c) {
    std::mt19937_64 gauge(0xC0FFEE);
    std::vector<uint64_t> det, obs;
    run_lanes(c, {}, &gauge, det, obs);
    return nonzero_indices(obs);
}

SampleBatch sample_frames(const Circuit &c, size_t shots, uint64_t seed, size_t threads) {
    check_deterministic(c);
    SampleBatch batch(shots, c.detector_count, c.observable_count, seed);
    auto groups = collect_sites(c);
    size_t nbatches = (shots + 63) / 64;
    threads = std::max<size_t>(1, std::min(threads, nbatches));

    auto worker = [&](size_t first) {
        std::vector<Event> events;
        std::vector<uint64_t> det, obs;
        for (size_t b = first; b < nbatches; b += threads) {
            size_t s0 = b * 64;
            size_t lanes = std::min<size_t>(64, shots - s0);
            events.clear();
            for (size_t l = 0; l < lanes; l++) {
                draw_shot(c, groups, seed, s0 + l, (uint8_t)l, events);
            }
            std::stable_sort(events.begin(), events.end(),
                             [](const Event &a, const Event &b) { return a.instr < b.instr; });
            run_lanes(c, events, nullptr, det, obs);
            for (size_t d = 0; d < det.size(); d++) {
                for (uint64_t w = det[d]; w; w &= w - 1) {
                    batch.set_detector(s0 + std::countr_zero(w), d);
                }
            }
            for (size_t k = 0; k < obs.size(); k++) {
                for (uint64_t w = obs[k]; w; w &= w - 1) {
                    batch.set_observable(s0 + std::countr_zero(w), k);
                }
            }
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (size_t t = 0; t < threads; t++) {
            pool.emplace_back(worker, t);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    return batch;
}

void write_b8(std::ostream &out, const SampleBatch &b) {
    size_t bits = b.detectors + b.observables;
    std::vector<char> row((bits + 7) / 8);
    for (size_t s = 0; s < b.shots; s++) {
        std::fill(row.begin(), row.end(), 0);
        for (size_t d = 0; d < b.detectors; d++) {
            if (b.detector(s, d)) {
                row[d >> 3] |= (char)(1 << (d & 7));
            }
        }
        for (size_t k = 0; k < b.observables; k++) {
            size_t i = b.detectors + k;
            if (b.observable(s, k)) {
                row[i >> 3] |= (char)(1 << (i & 7));
            }
        }
        out.write(row.data(), (std::streamsize)row.size());
    }
}

SampleBatch read_b8(std::istream &in, size_t shots, size_t detectors, size_t observables) {
    SampleBatch b(shots, detectors, observables, 0);
    size_t bits = detectors + observables;
    std::vector<char> row((bits + 7) / 8);
    for (size_t s = 0; s < shots; s++) {
        if (!in.read(row.data(), (std::streamsize)row.size())) {
            throw std::runtime_error("b8 input ended early");
        }
        for (size_t i = 0; i < bits; i++) {
            if ((row[i >> 3] >> (i & 7)) & 1) {
                if (i < detectors) {
                    b.set_detector(s, i);
                } else {
                    b.set_observable(s, i - detectors);
                }
            }
        }
    }
    return b;
}

void write_csv(std::ostream &out, const SampleBatch &b) {
    for (size_t s = 0; s < b.shots; s++) {
        std::string line;
        for (size_t d = 0; d < b.detectors; d++) {
            line += b.detector(s, d) ? '1' : '0';
            line += ',';
        }
        for (size_t k = 0; k < b.observables; k++) {
            line += b.observable(s, k) ? '1' : '0';
            line += ',';
        }
        if (!line.empty()) {
            line.pop_back();
        }
        out << line << "\n";
    }
}

std::string DetectorErrorModel::str() const {
    std::ostringstream out;
    for (const auto &m : mechanisms) {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), m.p);
        out << "error(" << std::string_view(buf, (size_t)(res.ptr - buf)) << ")";
        for (uint32_t d : m.detectors) {
            out << " D" << d;
        }
        for (uint32_t k : m.observables) {
            out << " L" << k;
        }
        out << "\n";
    }
    return out.str();
}

DetectorErrorModel DetectorErrorModel::parse(std::string_view text) {
    DetectorErrorModel dem;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) {
            continue;
        }
        if (head.rfind("error(", 0) != 0 || head.back() != ')') {
            throw std::invalid_argument("DEM line must start with error(p)");
        }
        ErrorMechanism m;
        std::string arg = head.substr(6, head.size() - 7);
        auto res = std::from_chars(arg.data(), arg.data() + arg.size(), m.p);
        if (res.ec != std::errc()) {
            throw std::invalid_argument("bad DEM probability");
        }
        std::string tok;
        while (ls >> tok) {
            uint32_t v = (uint32_t)std::stoul(tok.substr(1));
            if (tok[0] == 'D') {
                m.detectors.push_back(v);
                dem.detector_count = std::max(dem.detector_count, (size_t)v + 1);
            } else if (tok[0] == 'L') {
                m.observables.push_back(v);
                dem.observable_count = std::max(dem.observable_count, (size_t)v + 1);
            } else {
                throw std::invalid_argument("bad DEM target " + tok);
            }
        }
        dem.mechanisms.push_back(std::move(m));
    }
    return dem;
}

namespace {

using Sens = std::vector<uint32_t>;

void xor_into(Sens &dst, const Sens &src) {
    if (src.empty()) {
        return;
    }
    Sens out;
    out.reserve(dst.size() + src.size());
    std::set_symmetric_difference(dst.begin(), dst.end(), src.begin(), src.end(), std::back_inserter(out));
    dst.swap(out);
}

Sens xor_of(const Sens &a, const Sens &b) {
    Sens out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

DetectorErrorModel build_dem(const Circuit &c) {
    check_deterministic(c);
    size_t D = c.detector_count;

    // Which detectors / observables read each measurement.
    std::vector<Sens> readers(c.measurement_count);
    {
        size_t m = 0, d = 0;
        for (const Instruction &inst : c.instructions) {
            if (inst.op == Op::MEASURE_Z) {
                m += inst.targets.size();
            } else if (inst.op == Op::DETECTOR || inst.op == Op::OBSERVABLE) {
                uint32_t id = inst.op == Op::DETECTOR ? (uint32_t)d++ : (uint32_t)(D + inst.id);
                for (uint32_t k : inst.refs) {
                    readers[m - k].push_back(id);
                }
            }
        }
        for (auto &r : readers) {
            std::sort(r.begin(), r.end());
            // A detector reading the same measurement twice cancels it.
            Sens dedup;
            for (size_t i = 0; i < r.size();) {
                size_t j = i;
                while (j < r.size() && r[j] == r[i]) {
                    j++;
                }
                if ((j - i) % 2) {
                    dedup.push_back(r[i]);
                }
                i = j;
            }
            r.swap(dedup);
        }
    }

    size_t nq = c.qubit_count;
    std::vector<Sens> xs(nq), zs(nq), next_meas(nq);
    struct Elementary {
        Sens sig;
        double p;
    };
    std::vector<Elementary> found;
    size_t m = c.measurement_count;

    for (size_t i = c.instructions.size(); i-- > 0;) {
        const Instruction &inst = c.instructions[i];
        const auto &t = inst.targets;
        switch (inst.op) {
            case Op::RESET_Z:
            case Op::RESET_X:
                for (uint32_t q : t) {
                    xs[q].clear();
                    zs[q].clear();
                }
                break;
            case Op::H:
                for (uint32_t q : t) {
                    xs[q].swap(zs[q]);
                }
                break;
            case Op::CNOT:
                for (size_t k = t.size(); k >= 2; k -= 2) {
                    uint32_t a = t[k - 2], b = t[k - 1];
                    xor_into(xs[a], xs[b]);
                    xor_into(zs[b], zs[a]);
                }
                break;
            case Op::CZ:
                for (size_t k = t.size(); k >= 2; k -= 2) {
                    uint32_t a = t[k - 2], b = t[k - 1];
                    xor_into(xs[a], zs[b]);
                    xor_into(xs[b], zs[a]);
                }
                break;
            case Op::CAT_PREP:
                for (size_t j = t.size(); j-- > 1;) {
                    xor_into(xs[t[0]], xs[t[j]]);
                    xor_into(zs[t[j]], zs[t[0]]);
                }
                if (!t.empty()) {
                    xs[t[0]].swap(zs[t[0]]);
                }
                break;
            case Op::MEASURE_Z:
                for (size_t k = t.size(); k-- > 0;) {
                    --m;
                    xor_into(xs[t[k]], readers[m]);
                    next_meas[t[k]] = readers[m];
                }
                break;
            case Op::X_ERROR:
                if (inst.p > 0) {
                    for (size_t k = t.size(); k-- > 0;) {
                        found.push_back({xs[t[k]], inst.p});
                    }
                }
                break;
            case Op::MEAS_FLIP:
                if (inst.p > 0) {
                    for (size_t k = t.size(); k-- > 0;) {
                        found.push_back({next_meas[t[k]], inst.p});
                    }
                }
                break;
            case Op::ONE_HOT_X:
                if (inst.p > 0) {
                    for (size_t k = t.size(); k-- > 0;) {
                        found.push_back({xs[t[k]], inst.p / (double)t.size()});
                    }
                }
                break;
            case Op::DEPOL1:
                if (inst.p > 0) {
                    for (size_t k = t.size(); k-- > 0;) {
                        uint32_t q = t[k];
                        found.push_back({xor_of(xs[q], zs[q]), inst.p / 3});
                        found.push_back({zs[q], inst.p / 3});
                        found.push_back({xs[q], inst.p / 3});
                    }
                }
                break;
            case Op::DEPOL2:
                if (inst.p > 0) {
                    for (size_t k = t.size(); k >= 2; k -= 2) {
                        uint32_t a = t[k - 2], b = t[k - 1];
                        Sens sa[4] = {{}, xs[a], zs[a], xor_of(xs[a], zs[a])};
                        Sens sb[4] = {{}, xs[b], zs[b], xor_of(xs[b], zs[b])};
                        for (int code = 15; code >= 1; code--) {
                            found.push_back({xor_of(sa[code & 3], sb[code >> 2]), inst.p / 15});
                        }
                    }
                }
                break;
            default:
                break;
        }
    }

    // Merge in forward order of first appearance.
    std::reverse(found.begin(), found.end());
    DetectorErrorModel dem;
    dem.detector_count = D;
    dem.observable_count = c.observable_count;
    std::map<Sens, size_t> index;
    for (auto &e : found) {
        if (e.sig.empty()) {
            continue;
        }
        auto [it, fresh] = index.emplace(e.sig, dem.mechanisms.size());
        if (fresh) {
            ErrorMechanism mech;
            mech.p = e.p;
            for (uint32_t id : e.sig) {
                if (id < D) {
                    mech.detectors.push_back(id);
                } else {
                    mech.observables.push_back(id - (uint32_t)D);
                }
            }
            dem.mechanisms.push_back(std::move(mech));
        } else {
            double &p = dem.mechanisms[it->second].p;
            p = p * (1 - e.p) + e.p * (1 - p);
        }
    }
    return dem;
}

size_t elementary_mechanism_count(const Circuit &c) {
    size_t n = 0;
    for (const Instruction &inst : c.instructions) {
        if (!is_noise(inst.op) || inst.p <= 0) {
            continue;
        }
        if (inst.op == Op::DEPOL1) {
            n += 3 * inst.targets.size();
        } else if (inst.op == Op::DEPOL2) {
            n += 15 * (inst.targets.size() / 2);
        } else {
            n += inst.targets.size();
        }
    }
    return n;
}

double OutcomeDistribution::detector_marginal(size_t d) const {
    double s = 0;
    for (auto [key, p] : probability) {
        if ((key >> d) & 1) {
            s += p;
        }
    }
    return s;
}

double OutcomeDistribution::observable_marginal(size_t k) const { return detector_marginal(detectors + k); }

OutcomeDistribution enumerate_oracle(const Circuit &c, OracleMode mode) {
    size_t total = elementary_mechanism_count(c);
    if (total > 20) {
        throw std::invalid_argument("enumerate_oracle is limited to 20 elementary mechanisms");
    }
    if (c.detector_count + c.observable_count > 64) {
        throw std::invalid_argument("enumerate_oracle supports at most 64 detectors plus observables");
    }
    check_deterministic(c);

    // Elementary faults, each in its own lane of a single forward sweep.
    struct Fault {
        double p;
        int group;
    };
    std::vector<Fault> faults;
    std::vector<Event> events;
    int groups = 0;
    for (size_t i = 0; i < c.instructions.size(); i++) {
        const Instruction &inst = c.instructions[i];
        if (!is_noise(inst.op) || inst.p <= 0) {
            continue;
        }
        auto add = [&](uint32_t slot, uint8_t code, double p, int group) {
            events.push_back({(uint32_t)i, slot, code, (uint8_t)faults.size()});
            faults.push_back({p, group});
        };
        uint32_t n = (uint32_t)inst.targets.size();
        switch (inst.op) {
            case Op::X_ERROR:
            case Op::MEAS_FLIP:
                for (uint32_t s = 0; s < n; s++) {
                    add(s, 1, inst.p, -1);
                }
                break;
            case Op::DEPOL1:
                for (uint32_t s = 0; s < n; s++) {
                    for (uint8_t code = 1; code <= 3; code++) {
                        add(s, code, inst.p / 3, -1);
                    }
                }
                break;
            case Op::DEPOL2:
                for (uint32_t s = 0; s < n / 2; s++) {
                    for (uint8_t code = 1; code <= 15; code++) {
                        add(s, code, inst.p / 15, -1);
                    }
                }
                break;
            case Op::ONE_HOT_X: {
                int g = mode == OracleMode::exact_channels ? groups++ : -1;
                for (uint32_t s = 0; s < n; s++) {
                    add(s, 1, inst.p / n, g);
                }
                break;
            }
            default:
                break;
        }
    }
    std::vector<uint64_t> det, obs;
    run_lanes(c, events, nullptr, det, obs);
    size_t F = faults.size();
    std::vector<uint64_t> sig(F, 0);
    for (size_t d = 0; d < det.size(); d++) {
        for (size_t f = 0; f < F; f++) {
            sig[f] |= ((det[d] >> f) & 1) << d;
        }
    }
    for (size_t k = 0; k < obs.size(); k++) {
        for (size_t f = 0; f < F; f++) {
            sig[f] |= ((obs[k] >> f) & 1) << (c.detector_count + k);
        }
    }

    // Exclusive groups fire nothing with probability 1 - sum of their members.
    std::vector<double> group_idle(groups, 1.0);
    for (const Fault &f : faults) {
        if (f.group >= 0) {
            group_idle[f.group] -= f.p;
        }
    }

    OutcomeDistribution dist;
    dist.detectors = c.detector_count;
    dist.observables = c.observable_count;
    for (uint64_t subset = 0; subset < (uint64_t{1} << F); subset++) {
        double prob = 1;
        uint64_t key = 0;
        std::vector<int> used(groups, 0);
        bool possible = true;
        for (size_t f = 0; f < F && possible; f++) {
            bool on = (subset >> f) & 1;
            if (faults[f].group >= 0) {
                if (on) {
                    if (used[faults[f].group]++) {
                        possible = false;
                    }
                    prob *= faults[f].p;
                    key ^= sig[f];
                }
            } else if (on) {
                prob *= faults[f].p;
                key ^= sig[f];
            } else {
                prob *= 1 - faults[f].p;
            }
        }
        if (!possible) {
            continue;
        }
        for (int g = 0; g < groups; g++) {
            if (!used[g]) {
                prob *= group_idle[g];
            }
        }
        if (prob > 0) {
            dist.probability[key] += prob;
        }
    }
    return dist;
}

}  // namespace cavqec
