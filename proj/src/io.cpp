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

#include "cavqec/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cavqec {

using nlohmann::json;

namespace {

json matrix_json(const BitMatrix &m) {
    return json{{"rows", m.rows}, {"cols", m.cols}, {"row_supports", m.row_supports}};
}

BitMatrix matrix_from(const json &j) {
    BitMatrix m(j.at("rows").get<size_t>(), j.at("cols").get<size_t>());
    m.row_supports = j.at("row_supports").get<std::vector<std::vector<uint32_t>>>();
    m.validate();
    return m;
}

PauliType pauli_type_from(const std::string &s) {
    if (s == "X") {
        return PauliType::X;
    }
    if (s == "Z") {
        return PauliType::Z;
    }
    throw std::invalid_argument("check type must be X or Z");
}

}  // namespace

std::string code_to_json(const CssCode &code) {
    auto params = code_parameters(code);
    json j{{"n", code.n},
           {"k", params.k},
           {"n1", code.n1},
           {"n2", code.n2},
           {"r1", code.r1},
           {"r2", code.r2},
           {"boundary", to_string(code.boundary)},
           {"sector_of", code.sector_of},
           {"g_x", matrix_json(code.g_x)},
           {"g_z", matrix_json(code.g_z)}};
    return j.dump(1);
}

CssCode code_from_json(std::string_view text) {
    json j = json::parse(text);
    CssCode c;
    c.n = j.at("n").get<size_t>();
    c.n1 = j.value("n1", size_t{0});
    c.n2 = j.value("n2", size_t{0});
    c.r1 = j.value("r1", size_t{0});
    c.r2 = j.value("r2", size_t{0});
    c.boundary = boundary_from_string(j.value("boundary", std::string("open")));
    c.sector_of = j.value("sector_of", std::vector<uint8_t>{});
    c.g_x = matrix_from(j.at("g_x"));
    c.g_z = matrix_from(j.at("g_z"));
    c.validate();
    return c;
}

std::string schedule_to_json(const Schedule &s, const Layout &lay) {
    json steps = json::array();
    for (const auto &t : s.timesteps) {
        json step = json::array();
        for (const auto &c : t.checks) {
            const auto &line = lay.check_lines(c.type).at(c.index);
            step.push_back(json{{"type", c.type == PauliType::X ? "X" : "Z"},
                                {"index", c.index},
                                {"row", line.row},
                                {"col", line.col}});
        }
        steps.push_back(json{{"phase", t.phase == Phase::z_pass ? "Z" : "X"}, {"checks", step}});
    }
    return json{{"timesteps", steps}}.dump(1);
}

Schedule schedule_from_json(std::string_view text) {
    json j = json::parse(text);
    Schedule s;
    for (const auto &step : j.at("timesteps")) {
        Timestep t;
        t.phase = pauli_type_from(step.at("phase").get<std::string>()) == PauliType::Z ? Phase::z_pass : Phase::x_pass;
        for (const auto &c : step.at("checks")) {
            t.checks.push_back(CheckRef{pauli_type_from(c.at("type").get<std::string>()), c.at("index").get<uint32_t>()});
        }
        s.timesteps.push_back(std::move(t));
    }
    return s;
}

std::string fit_to_json(const FitResult &fit, const std::vector<double> &crossings) {
    json j{{"A", fit.A},         {"A_err", fit.A_err},     {"a", fit.a},
           {"a_err", fit.a_err}, {"b", fit.b},             {"b_err", fit.b_err},
           {"p_th", fit.p_th},   {"p_th_err", fit.p_th_err}, {"residual", fit.residual},
           {"fixed_a_b", fit.fixed_a_b}, {"crossings", crossings}};
    return j.dump(1);
}

std::string reports_to_json(const std::vector<VerifierReport> &reports) {
    json arr = json::array();
    for (const auto &r : reports) {
        json checks = json::array();
        for (const auto &c : r.checks) {
            checks.push_back(json{{"check", c.name}, {"deviation", c.deviation}, {"tolerance", c.tolerance}, {"pass", c.passed}});
        }
        arr.push_back(json{{"name", r.name}, {"pass", r.passed()}, {"checks", checks}, {"metrics", r.metrics}});
    }
    return arr.dump(1);
}

Manifest manifest_from_json(std::string_view text) {
    json j = json::parse(text);
    Manifest m;
    for (const auto &c : j.at("codes")) {
        ManifestCode mc;
        mc.polynomial.exponents = c.at("polynomial").get<std::vector<uint32_t>>();
        mc.lift = c.at("lift").get<size_t>();
        mc.boundary = boundary_from_string(c.value("boundary", std::string("periodic")));
        mc.d = c.at("d").get<size_t>();
        mc.id = c.value("id", "lift" + std::to_string(mc.lift));
        m.codes.push_back(std::move(mc));
    }
    m.p = j.at("p").get<std::vector<double>>();
    m.m = j.value("m", 1.0);
    m.model = model_from_string(j.value("model", std::string("agnostic")));
    m.shots = j.value("shots", size_t{1000});
    m.rounds = j.value("rounds", size_t{0});
    return m;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << contents;
}

}  // namespace cavqec
