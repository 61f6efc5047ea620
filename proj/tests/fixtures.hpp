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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "cavqec/harness.hpp"

namespace cavqec::testing {

struct CooperativityRow {
    const char *model;
    double m;
    double p_th;
    double c;  // reference value, three significant figures
};

// Threshold-to-cooperativity tables for the h = 1 + x + x^2 family, N = 6.
inline const std::vector<CooperativityRow> &cooperativity_rows() {
    static const std::vector<CooperativityRow> rows{
        {"custom", 0.5, 7.99e-3, 1.10e7},   {"custom", 1, 7.78e-3, 2.89e6},   {"custom", 2, 6.94e-3, 9.08e5},
        {"custom", 3, 6.78e-3, 4.23e5},     {"custom", 4, 5.78e-3, 3.27e5},   {"custom", 5, 5.48e-3, 2.33e5},
        {"custom", 10, 5.31e-3, 6.20e4},    {"agnostic", 0.5, 8.43e-3, 9.85e6}, {"agnostic", 1, 8.12e-3, 2.65e6},
        {"agnostic", 2, 7.90e-3, 7.01e5},   {"agnostic", 3, 7.68e-3, 3.30e5}, {"agnostic", 4, 7.08e-3, 2.18e5},
        {"agnostic", 5, 6.59e-3, 1.61e5},   {"agnostic", 10, 6.09e-3, 4.72e4},
    };
    return rows;
}

inline double round_sig(double v, int digits) {
    double scale = std::pow(10.0, digits - 1 - (int)std::floor(std::log10(std::fabs(v))));
    return std::round(v * scale) / scale;
}

struct TrueLaw {
    double A = 0.1, a = 0.75, b = 1.0, p_th = 8e-3;
    double operator()(double p, double d) const { return A * std::pow(p / p_th, a * std::pow(d, b)); }
};

enum class Noise { bounded, gaussian };

// Points from `law` at the given distances and rates, each multiplied by 1 + noise * u, with
// u uniform on [-1, 1] (bounded) or standard normal (gaussian). The standard error is set
// to `noise` (or 5%) of the rate.
inline std::vector<DataPoint> synthetic_points(const TrueLaw &law, const std::vector<size_t> &ds,
                                               const std::vector<double> &ps, double noise, std::mt19937_64 &rng,
                                               Noise kind = Noise::bounded) {
    std::normal_distribution<double> gauss(0, 1);
    std::uniform_real_distribution<double> uniform(-1, 1);
    std::vector<DataPoint> out;
    for (size_t d : ds) {
        for (double p : ps) {
            DataPoint pt;
            pt.code_id = "d" + std::to_string(d);
            pt.d = d;
            pt.p = p;
            pt.m = 1;
            pt.shots = 100000;
            pt.failures = 1000;
            pt.rounds = d;
            double u = kind == Noise::gaussian ? gauss(rng) : uniform(rng);
            double factor = noise > 0 ? 1 + noise * u : 1;
            pt.per_round_rate = law(p, (double)d) * factor;
            pt.std_error = pt.per_round_rate * (noise > 0 ? noise : 0.05);
            out.push_back(pt);
        }
    }
    return out;
}

}  // namespace cavqec::testing
