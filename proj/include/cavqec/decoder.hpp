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
#include <memory>
#include <stdexcept>
#include <vector>

#include "cavqec/gf2.hpp"
#include "cavqec/sim.hpp"

namespace cavqec {

struct DecoderConfig {
    size_t max_iterations = 30;
    double min_sum_scale = 0.625;
    // 0 selects OSD-0; anything larger enables the weight-1/weight-2 combination sweep.
    size_t osd_order = 0;
    size_t osd_sweep_depth = 10;
    // Stop as soon as the hard decision reproduces the syndrome. Turning this off runs
    // every iteration, which is what max-marginal comparisons on trees need.
    bool stop_on_syndrome = true;

    void validate() const;
};

class InfeasibleSyndrome : public std::runtime_error {
   public:
    InfeasibleSyndrome() : std::runtime_error("syndrome is not in the column space of the check matrix") {}
};

struct BpResult {
    std::vector<double> soft;  // posterior flip probability per column
    BitVector hard;
    bool converged = false;
    size_t iterations = 0;
};

BpResult bp_decode(const BitMatrix &h, const std::vector<double> &priors, const BitVector &s, const DecoderConfig &cfg = {});

BitVector osd0(const BitMatrix &h, const std::vector<double> &soft, const BitVector &s);
BitVector osd_w(const BitMatrix &h, const std::vector<double> &soft, const BitVector &s, const DecoderConfig &cfg);

struct DecodeResult {
    BitVector correction;
    bool converged = false;
    BitVector predicted_observables;
    std::vector<double> soft_outputs;
};

// Check matrix, priors and observable matrix of a DEM, built once and shared across shots.
class Decoder {
   public:
    explicit Decoder(const DetectorErrorModel &dem, DecoderConfig cfg = {});

    DecodeResult decode(const BitVector &detectors) const;
    // Packed-row entry point used by the experiment driver; returns the predicted
    // observable flips as a packed word vector.
    std::vector<uint64_t> predict(const uint64_t *detector_row, bool *converged = nullptr) const;

    const BitMatrix &check_matrix() const { return h_; }
    const BitMatrix &observable_matrix() const { return l_; }
    const std::vector<double> &priors() const { return priors_; }
    const DecoderConfig &config() const { return cfg_; }

   private:
    DecoderConfig cfg_;
    BitMatrix h_;
    BitMatrix l_;
    std::vector<double> priors_;
    struct Graph;
    std::shared_ptr<const Graph> graph_;
};

DecodeResult decode_shot(const DetectorErrorModel &dem, const BitVector &detectors, const DecoderConfig &cfg = {});

}  // namespace cavqec
