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
#include <string_view>
#include <vector>

#include "cavqec/codes.hpp"
#include "cavqec/schedule.hpp"

namespace cavqec {

enum class Op : uint8_t {
    RESET_Z,
    RESET_X,
    H,
    CNOT,
    CZ,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    MEASURE_Z,
    DEPOL1,
    DEPOL2,
    X_ERROR,
    MEAS_FLIP,
    ONE_HOT_X,
    CAT_PREP,
    DETECTOR,
    OBSERVABLE,
    TICK,
};

std::string_view op_name(Op op);
bool is_noise(Op op);
bool is_two_qubit(Op op);

struct Instruction {
    Op op = Op::TICK;
    double p = 0;
    std::vector<uint32_t> targets;
    // Lookbacks into the measurement record: k means rec[-k].
    std::vector<uint32_t> refs;
    uint32_t id = 0;

    bool operator==(const Instruction &) const = default;
};

enum class DetectorKind : uint8_t { time, local, final, other };

struct DetectorTag {
    DetectorKind kind = DetectorKind::other;
    CheckRef check;
    uint32_t round = 0;
};

class Circuit {
   public:
    std::vector<Instruction> instructions;
    size_t qubit_count = 0;
    size_t measurement_count = 0;
    size_t detector_count = 0;
    size_t observable_count = 0;
    // Parallel to detector order; not part of the text form.
    std::vector<DetectorTag> detector_tags;
    size_t pruned_detectors = 0;

    // Validates and appends, keeping the counters in sync.
    void append(Instruction inst);
    void append(Op op, std::vector<uint32_t> targets, double p = 0);
    void detector(const std::vector<uint32_t> &absolute_measurements, DetectorTag tag = {});
    void observable(uint32_t id, const std::vector<uint32_t> &absolute_measurements);
    void tick() { append(Op::TICK, {}); }

    size_t count(Op op) const;
    std::string str() const;
    static Circuit parse(std::string_view text);
    bool operator==(const Circuit &other) const { return instructions == other.instructions; }
};

struct NoiseModel {
    double p1 = 0;
    double p2 = 0;
    double p_in = 0;
    double p_meas = 0;
    double p_wait = 0;
    double p_cavity = 0;
};

enum class ModelKind { agnostic, custom };

ModelKind model_from_string(const std::string &s);
std::string to_string(ModelKind k);

NoiseModel make_noise_model(ModelKind kind, double p, double m);

// Conditional probabilities of the staged single-flip chain: stage k fires with
// p / (N - k p) given that no earlier stage fired.
std::vector<double> one_hot_stage_probabilities(size_t n, double p);
std::vector<Instruction> one_hot_x_channel(const std::vector<uint32_t> &qubits, double p);

struct DaRoundQubits {
    // Coupling order: primary ancilla i talks to data[i].
    std::vector<uint32_t> data;
    std::vector<uint32_t> primary;
    std::vector<uint32_t> redundant;
};

struct DaRoundRecord {
    std::vector<uint32_t> primary;
    std::vector<uint32_t> redundant;
};

struct DaOptions {
    bool local_detectors = true;
    // One detector per ancilla pair instead of a single parity-vs-parity detector.
    bool per_qubit_local = false;
};

// One syndrome-extraction round for a single check, appended to `c`.
// Outcomes: primary[0] and redundant[0] both carry the syndrome bit, and
// primary[j] == redundant[j] for j >= 1.
DaRoundRecord append_da_round(Circuit &c, PauliType type, const DaRoundQubits &q, const NoiseModel &noise,
                              const DaOptions &opt = {}, DetectorTag tag = {});

// Standalone round on data qubits 0..n-1 with ancillas n..n+2w-1.
Circuit build_da_round(const CssCode &code, PauliType type, size_t check_index, const NoiseModel &noise,
                       const DaOptions &opt = {});

struct MemoryOptions {
    // One local detector per primary/redundant pair instead of one per check. The decoder
    // needs the individual pairs to tell decoding faults from encoding faults.
    bool per_qubit_local = true;
    bool final_detectors = true;
};

Circuit build_memory_experiment(const CssCode &code, size_t rounds, const NoiseModel &noise, const Schedule &schedule,
                                const MemoryOptions &opt = {});

}  // namespace cavqec
