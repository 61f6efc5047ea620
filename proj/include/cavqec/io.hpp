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

#include <string>
#include <string_view>
#include <vector>

#include "cavqec/codes.hpp"
#include "cavqec/harness.hpp"
#include "cavqec/schedule.hpp"
#include "cavqec/steane.hpp"

namespace cavqec {

// JSON documents exchanged by the command-line tool. Matrices are stored as row supports.
std::string code_to_json(const CssCode &code);
CssCode code_from_json(std::string_view text);

std::string schedule_to_json(const Schedule &s, const Layout &lay);
Schedule schedule_from_json(std::string_view text);

std::string fit_to_json(const FitResult &fit, const std::vector<double> &crossings);
std::string reports_to_json(const std::vector<VerifierReport> &reports);

// Experiment manifest: {"codes": [{"id", "polynomial", "lift", "boundary", "d"}], "p": [...],
// "m", "model", "shots", "rounds"}.
struct ManifestCode {
    std::string id;
    CheckPolynomial polynomial;
    size_t lift = 0;
    Boundary boundary = Boundary::periodic;
    size_t d = 0;
};

struct Manifest {
    std::vector<ManifestCode> codes;
    std::vector<double> p;
    double m = 1;
    ModelKind model = ModelKind::agnostic;
    size_t shots = 1000;
    size_t rounds = 0;
};

Manifest manifest_from_json(std::string_view text);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &contents);

}  // namespace cavqec
