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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cavqec/circuit.hpp"
#include "cavqec/codes.hpp"
#include "cavqec/decoder.hpp"

namespace cavqec {

struct DataPoint {
    std::string code_id;
    size_t d = 0;
    double p = 0;
    double m = 0;
    ModelKind model = ModelKind::agnostic;
    size_t shots = 0;
    size_t failures = 0;
    size_t rounds = 0;
    double per_round_rate = 0;
    double std_error = 0;

    void validate() const;
};

struct RunOptions {
    size_t rounds = 0;  // 0 means "use d"
    size_t shots = 1000;
    uint64_t seed = 0;
    size_t threads = 1;
    DecoderConfig decoder;
    MemoryOptions memory;
};

// Builds the memory circuit for `code`, samples, decodes every shot and counts shots
// where any logical observable is mispredicted.
DataPoint run_point(const CssCode &code, const std::string &code_id, size_t d, double p, double m, ModelKind model,
                    const RunOptions &opt);

double per_round(double p_total, size_t d);
double total_from_per_round(double p_round, size_t d);

struct FitResult {
    double A = 0, a = 0, b = 0, p_th = 0;
    double A_err = 0, a_err = 0, b_err = 0, p_th_err = 0;
    double residual = 0;
    bool fixed_a_b = false;
};

// Least squares on log P = log A + a d^b (log p - log p_th) over all points jointly.
FitResult fit_threshold(const std::vector<DataPoint> &points,
                        std::optional<std::pair<double, double>> fix_a_b = std::nullopt);

double cooperativity(size_t n, double m, double p_th);

// Where a single code's per-round rate crosses the physical rate, by log-log interpolation.
double pseudo_threshold(std::vector<DataPoint> points);

// Physical rates where the per-round curves of two codes cross, by log-log interpolation
// between consecutive shared p values.
std::vector<double> curve_crossings(std::vector<DataPoint> a, std::vector<DataPoint> b);

// Two-sided 95% Wilson interval for failures / shots.
std::pair<double, double> wilson_interval(size_t failures, size_t shots, double z = 1.959963984540054);

std::string points_csv_header();
std::string to_csv_row(const DataPoint &pt);
std::vector<DataPoint> points_from_csv(const std::string &text);

}  // namespace cavqec
