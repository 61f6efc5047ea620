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

#include "cavqec/schedule.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cavqec {

std::string to_string(const CheckRef &c) {
    return std::string(c.type == PauliType::X ? "X" : "Z") + std::to_string(c.index);
}

uint32_t CavityMap::row_cavity(PauliType layer, uint32_t row) const {
    size_t base = layer == PauliType::Z ? 0 : rows + cols;
    return (uint32_t)(base + row);
}

uint32_t CavityMap::col_cavity(PauliType layer, uint32_t col) const {
    size_t base = layer == PauliType::Z ? 0 : rows + cols;
    return (uint32_t)(base + rows + col);
}

std::pair<uint32_t, uint32_t> CavityMap::cavities_of(const CheckRef &c) const {
    const auto &lines = c.type == PauliType::X ? x_lines : z_lines;
    if (c.index >= lines.size()) {
        throw std::out_of_range("check index out of range");
    }
    const GridPoint &p = lines[c.index];
    return {row_cavity(c.type, p.row), col_cavity(c.type, p.col)};
}

CavityMap assign_cavities(const Layout &lay) {
    CavityMap m;
    m.rows = lay.rows;
    m.cols = lay.cols;
    m.x_lines = lay.x_check_lines;
    m.z_lines = lay.z_check_lines;
    return m;
}

namespace {

std::vector<std::vector<CheckRef>> diagonals(const Layout &lay, PauliType type, bool periodic) {
    size_t cr = lay.cell_rows();
    size_t cc = lay.cell_cols();
    size_t count = periodic ? cr : cr + cc - 1;
    std::vector<std::vector<CheckRef>> out(count);
    const auto &lines = lay.check_lines(type);
    for (size_t k = 0; k < lines.size(); k++) {
        long u = lines[k].row / 2;
        long v = lines[k].col / 2;
        long d = periodic ? ((u - v) % (long)cr + (long)cr) % (long)cr : u - v + (long)cc - 1;
        out[(size_t)d].push_back({type, (uint32_t)k});
    }
    for (auto &step : out) {
        std::stable_sort(step.begin(), step.end(), [&](const CheckRef &a, const CheckRef &b) {
            return lines[a.index].row < lines[b.index].row;
        });
    }
    return out;
}

}  // namespace

Schedule diagonal_schedule(const CssCode &code, const Layout &lay, bool interleave) {
    bool periodic = code.boundary == Boundary::periodic && lay.cell_rows() == lay.cell_cols();
    auto zs = diagonals(lay, PauliType::Z, periodic);
    auto xs = diagonals(lay, PauliType::X, periodic);
    Schedule s;
    if (interleave) {
        for (size_t d = 0; d < zs.size(); d++) {
            s.timesteps.push_back({Phase::z_pass, zs[d]});
            s.timesteps.push_back({Phase::x_pass, xs[d]});
        }
        return s;
    }
    for (auto &step : zs) {
        s.timesteps.push_back({Phase::z_pass, std::move(step)});
    }
    for (auto &step : xs) {
        s.timesteps.push_back({Phase::x_pass, std::move(step)});
    }
    return s;
}

ScheduleReport validate_schedule(const Schedule &s, const CavityMap &cavities) {
    ScheduleReport rep;
    for (size_t t = 0; t < s.timesteps.size() && !rep.conflict; t++) {
        std::map<uint32_t, CheckRef> owner;
        for (const CheckRef &c : s.timesteps[t].checks) {
            auto [rc, cc] = cavities.cavities_of(c);
            for (uint32_t cav : {rc, cc}) {
                auto [it, fresh] = owner.emplace(cav, c);
                if (!fresh && !rep.conflict) {
                    rep.conflict_step = t;
                    rep.conflict = std::make_pair(it->second, c);
                }
            }
        }
    }
    for (PauliType type : {PauliType::Z, PauliType::X}) {
        std::vector<size_t> seen(cavities.check_count(type), 0);
        for (const Timestep &ts : s.timesteps) {
            for (const CheckRef &c : ts.checks) {
                if (c.type == type) {
                    seen[c.index]++;
                }
            }
        }
        for (size_t k = 0; k < seen.size(); k++) {
            if (seen[k] == 0) {
                rep.missing.push_back({type, (uint32_t)k});
            } else if (seen[k] > 1) {
                rep.repeated.push_back({type, (uint32_t)k});
            }
        }
    }
    rep.ok = !rep.conflict && rep.missing.empty() && rep.repeated.empty();
    if (rep.conflict) {
        rep.message = "cavity conflict at step " + std::to_string(*rep.conflict_step) + " between " +
                      to_string(rep.conflict->first) + " and " + to_string(rep.conflict->second);
    } else if (!rep.missing.empty()) {
        rep.message = std::to_string(rep.missing.size()) + " checks never scheduled, first " + to_string(rep.missing[0]);
    } else if (!rep.repeated.empty()) {
        rep.message = "check " + to_string(rep.repeated[0]) + " scheduled more than once";
    } else {
        rep.message = "ok";
    }
    return rep;
}

std::vector<uint32_t> merge_ghz_correction(int m, const std::vector<uint32_t> &branch_qubits) {
    if (m != 0 && m != 1) {
        throw std::invalid_argument("merge outcome must be 0 or 1");
    }
    return m ? branch_qubits : std::vector<uint32_t>{};
}

}  // namespace cavqec
