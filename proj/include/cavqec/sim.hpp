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
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cavqec/circuit.hpp"

namespace cavqec {

// Pauli operator up to phase; x[q], z[q] in {0, 1}.
struct Pauli {
    std::vector<uint8_t> x;
    std::vector<uint8_t> z;

    explicit Pauli(size_t n = 0) : x(n, 0), z(n, 0) {}
    static Pauli from_string(std::string_view s);  // e.g. "XIZY"
    std::string str() const;
    bool operator==(const Pauli &) const = default;
};

// Conjugates p through one Clifford instruction (H, CNOT, CZ, PAULI_*, CAT_PREP, TICK).
Pauli propagate_pauli(const Pauli &p, const Instruction &inst);

struct SampleBatch {
    size_t shots = 0;
    size_t detectors = 0;
    size_t observables = 0;
    uint64_t seed = 0;
    size_t det_words = 0;
    size_t obs_words = 0;
    std::vector<uint64_t> det;
    std::vector<uint64_t> obs;

    SampleBatch() = default;
    SampleBatch(size_t shots_, size_t dets, size_t obs_, uint64_t seed_);
    bool detector(size_t shot, size_t d) const { return (det[shot * det_words + (d >> 6)] >> (d & 63)) & 1; }
    bool observable(size_t shot, size_t k) const { return (obs[shot * obs_words + (k >> 6)] >> (k & 63)) & 1; }
    const uint64_t *detector_row(size_t shot) const { return det.data() + shot * det_words; }
    const uint64_t *observable_row(size_t shot) const { return obs.data() + shot * obs_words; }
    void set_detector(size_t shot, size_t d) { det[shot * det_words + (d >> 6)] |= uint64_t{1} << (d & 63); }
    void set_observable(size_t shot, size_t k) { obs[shot * obs_words + (k >> 6)] |= uint64_t{1} << (k & 63); }
    bool operator==(const SampleBatch &) const = default;
};

// Shot s draws from its own generator keyed by (seed, s), so results do not depend on
// the thread count. Throws if the noiseless circuit has random detectors or observables.
SampleBatch sample_frames(const Circuit &c, size_t shots, uint64_t seed, size_t threads = 1);

// Detectors / observables that are not fixed in the noiseless circuit.
std::vector<uint32_t> nondeterministic_detectors(const Circuit &c);
std::vector<uint32_t> nondeterministic_observables(const Circuit &c);

// Batch I/O. "b8": per shot, detector bits then observable bits, packed little-endian into
// bytes and padded to a byte boundary. "csv": one line of 0/1 per shot.
void write_b8(std::ostream &out, const SampleBatch &b);
SampleBatch read_b8(std::istream &in, size_t shots, size_t detectors, size_t observables);
void write_csv(std::ostream &out, const SampleBatch &b);

struct ErrorMechanism {
    double p = 0;
    std::vector<uint32_t> detectors;
    std::vector<uint32_t> observables;
    bool operator==(const ErrorMechanism &) const = default;
};

struct DetectorErrorModel {
    std::vector<ErrorMechanism> mechanisms;
    size_t detector_count = 0;
    size_t observable_count = 0;

    std::string str() const;
    static DetectorErrorModel parse(std::string_view text);
};

DetectorErrorModel build_dem(const Circuit &c);

// Number of elementary Pauli faults with nonzero probability.
size_t elementary_mechanism_count(const Circuit &c);

enum class OracleMode {
    // One-hot channels fire at most one fault, everything else independent: the sampler's law.
    exact_channels,
    // Every elementary fault independent: the law a detector error model describes.
    independent_mechanisms,
};

struct OutcomeDistribution {
    size_t detectors = 0;
    size_t observables = 0;
    // Key bit d is detector d; bit detectors + k is observable k.
    std::map<uint64_t, double> probability;

    double detector_marginal(size_t d) const;
    double observable_marginal(size_t k) const;
};

OutcomeDistribution enumerate_oracle(const Circuit &c, OracleMode mode = OracleMode::exact_channels);

}  // namespace cavqec
