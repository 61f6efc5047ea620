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
#include <vector>

#include "cavqec/codes.hpp"

namespace cavqec {

struct CheckRef {
    PauliType type = PauliType::Z;
    uint32_t index = 0;
    bool operator==(const CheckRef &) const = default;
};

std::string to_string(const CheckRef &c);

// Z-checks talk through the ancilla-1 layer and X-checks through the ancilla-2 layer.
// Each layer has one cavity per grid row followed by one per grid column.
struct CavityMap {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<GridPoint> x_lines;
    std::vector<GridPoint> z_lines;

    size_t count() const { return 2 * (rows + cols); }
    uint32_t row_cavity(PauliType layer, uint32_t row) const;
    uint32_t col_cavity(PauliType layer, uint32_t col) const;
    // (row cavity, column cavity) driven by a check.
    std::pair<uint32_t, uint32_t> cavities_of(const CheckRef &c) const;
    size_t check_count(PauliType t) const { return t == PauliType::X ? x_lines.size() : z_lines.size(); }
};

enum class Phase { z_pass, x_pass };

struct Timestep {
    Phase phase = Phase::z_pass;
    std::vector<CheckRef> checks;
};

struct Schedule {
    std::vector<Timestep> timesteps;
};

struct ScheduleReport {
    bool ok = true;
    // First pair of checks sharing a cavity inside one timestep.
    std::optional<size_t> conflict_step;
    std::optional<std::pair<CheckRef, CheckRef>> conflict;
    std::vector<CheckRef> missing;
    std::vector<CheckRef> repeated;
    std::string message;
};

CavityMap assign_cavities(const Layout &lay);

// Checks are grouped by the diagonal of their unit cell (row/2, col/2): plain row - col
// for open boundaries, (row - col) mod size for periodic ones. The walk covers every
// diagonal of the cell grid, so boundary diagonals without checks stay as idle steps.
// With `interleave` the Z and X diagonals alternate instead of running as two passes.
Schedule diagonal_schedule(const CssCode &code, const Layout &lay, bool interleave = false);

ScheduleReport validate_schedule(const Schedule &s, const CavityMap &cavities);

enum class MergeBranch { horizontal, vertical };

// Pauli-X correction after fusing two cat states with a ZZ parity measurement: nothing
// when m = 0, X on every qubit of the chosen branch when m = 1.
std::vector<uint32_t> merge_ghz_correction(int m, const std::vector<uint32_t> &branch_qubits);

}  // namespace cavqec
