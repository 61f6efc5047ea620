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

#include <gtest/gtest.h>

#include <set>

using namespace cavqec;

namespace {

CssCode rep_product(size_t n) {
    BitMatrix h = open_boundary(circulant_from_polynomial({{0, 1}}, n), 1);
    return hypergraph_product(h, h);
}

}  // namespace

TEST(cavities, counts) {
    EXPECT_EQ(assign_cavities(layout(rep_product(5))).count(), 36u);
    EXPECT_EQ(assign_cavities(layout(code_from_polynomial({{0, 1, 2}}, 6, Boundary::periodic))).count(), 48u);
    Layout one;
    one.rows = 1;
    one.cols = 1;
    EXPECT_EQ(assign_cavities(one).count(), 4u);
}

TEST(cavities, each_cavity_serves_one_line_of_one_layer) {
    CavityMap m = assign_cavities(layout(rep_product(4)));
    std::set<uint32_t> ids;
    for (PauliType t : {PauliType::Z, PauliType::X}) {
        for (uint32_t r = 0; r < m.rows; r++) {
            ids.insert(m.row_cavity(t, r));
        }
        for (uint32_t c = 0; c < m.cols; c++) {
            ids.insert(m.col_cavity(t, c));
        }
    }
    EXPECT_EQ(ids.size(), m.count());
}

TEST(diagonal_schedule, step_count_for_repetition_products) {
    for (size_t n = 2; n <= 8; n++) {
        CssCode c = rep_product(n);
        Layout lay = layout(c);
        Schedule s = diagonal_schedule(c, lay);
        EXPECT_EQ(s.timesteps.size(), 2 * (2 * n - 1)) << n;
        ScheduleReport r = validate_schedule(s, assign_cavities(lay));
        EXPECT_TRUE(r.ok) << n << ": " << r.message;
    }
}

TEST(diagonal_schedule, z_pass_precedes_x_pass) {
    CssCode c = rep_product(5);
    Schedule s = diagonal_schedule(c, layout(c));
    ASSERT_EQ(s.timesteps.size(), 18u);
    for (size_t t = 0; t < 9; t++) {
        EXPECT_EQ(s.timesteps[t].phase, Phase::z_pass);
        for (auto &ch : s.timesteps[t].checks) {
            EXPECT_EQ(ch.type, PauliType::Z);
        }
    }
    for (size_t t = 9; t < 18; t++) {
        EXPECT_EQ(s.timesteps[t].phase, Phase::x_pass);
    }
}

TEST(diagonal_schedule, degenerate_single_check) {
    BitMatrix one = circulant_from_polynomial({{0}}, 1);
    CssCode c = hypergraph_product(one, one);
    EXPECT_EQ(diagonal_schedule(c, layout(c)).timesteps.size(), 2u);
}

TEST(diagonal_schedule, periodic_codes_validate) {
    for (size_t lift : {6, 9, 12}) {
        CssCode c = code_from_polynomial({{0, 1, 2}}, lift, Boundary::periodic);
        Layout lay = layout(c);
        ScheduleReport r = validate_schedule(diagonal_schedule(c, lay), assign_cavities(lay));
        EXPECT_TRUE(r.ok) << lift << ": " << r.message;
        ScheduleReport ri = validate_schedule(diagonal_schedule(c, lay, true), assign_cavities(lay));
        EXPECT_TRUE(ri.ok) << lift << ": " << ri.message;
    }
}

TEST(diagonal_schedule, rows_sorted_within_step) {
    CssCode c = rep_product(6);
    Layout lay = layout(c);
    for (const Timestep &ts : diagonal_schedule(c, lay).timesteps) {
        for (size_t i = 1; i < ts.checks.size(); i++) {
            const auto &lines = lay.check_lines(ts.checks[i].type);
            EXPECT_LT(lines[ts.checks[i - 1].index].row, lines[ts.checks[i].index].row);
        }
    }
}

TEST(validate_schedule, same_row_conflict_names_both_checks) {
    CssCode c = rep_product(5);
    Layout lay = layout(c);
    CavityMap cav = assign_cavities(lay);
    ASSERT_EQ(lay.z_check_lines[0].row, lay.z_check_lines[1].row);
    Schedule s = diagonal_schedule(c, lay);
    s.timesteps.insert(s.timesteps.begin(), Timestep{Phase::z_pass, {{PauliType::Z, 0}, {PauliType::Z, 1}}});
    ScheduleReport r = validate_schedule(s, cav);
    EXPECT_FALSE(r.ok);
    ASSERT_TRUE(r.conflict.has_value());
    EXPECT_EQ(*r.conflict_step, 0u);
    EXPECT_EQ(r.conflict->first, (CheckRef{PauliType::Z, 0}));
    EXPECT_EQ(r.conflict->second, (CheckRef{PauliType::Z, 1}));
    EXPECT_NE(r.message.find("Z0"), std::string::npos);
    EXPECT_NE(r.message.find("Z1"), std::string::npos);
}

TEST(validate_schedule, different_layers_do_not_conflict) {
    CssCode c = rep_product(3);
    Layout lay = layout(c);
    CavityMap cav = assign_cavities(lay);
    // A Z check and an X check on the same grid row use different ancilla layers.
    Schedule s;
    s.timesteps.push_back({Phase::z_pass, {{PauliType::Z, 0}, {PauliType::X, 0}}});
    ScheduleReport r = validate_schedule(s, cav);
    EXPECT_FALSE(r.conflict.has_value());
}

TEST(validate_schedule, empty_schedule_is_incomplete) {
    CssCode c = rep_product(3);
    ScheduleReport r = validate_schedule(Schedule{}, assign_cavities(layout(c)));
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.missing.size(), c.g_x.rows + c.g_z.rows);
}

TEST(validate_schedule, repeated_check) {
    CssCode c = rep_product(3);
    Layout lay = layout(c);
    Schedule s = diagonal_schedule(c, lay);
    s.timesteps.push_back({Phase::x_pass, {{PauliType::X, 0}}});
    ScheduleReport r = validate_schedule(s, assign_cavities(lay));
    EXPECT_FALSE(r.ok);
    ASSERT_EQ(r.repeated.size(), 1u);
}

TEST(merge_correction, branches) {
    EXPECT_TRUE(merge_ghz_correction(0, {0, 1, 2}).empty());
    EXPECT_EQ(merge_ghz_correction(1, {0, 1, 2}), (std::vector<uint32_t>{0, 1, 2}));
    EXPECT_EQ(merge_ghz_correction(1, {3, 4, 5}), (std::vector<uint32_t>{3, 4, 5}));
    EXPECT_THROW(merge_ghz_correction(2, {0}), std::invalid_argument);
}
