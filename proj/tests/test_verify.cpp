// Copyright 2026 The qgc Authors
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

#include <gtest/gtest.h>

#include <cmath>

#include "qgc/verify.hpp"

using namespace qgc;

namespace {

TeleportParams fixed_labels() {
    return TeleportParams::from_labels(Bits::from_string("01"), Bits::from_string("10"), Bits::from_string("11"),
                                       Bits::from_string("00"), 0, 0, 0, 0);
}

}  // namespace

TEST(verify, closed_form_basis_example) {
    // |0>, no twirl: branch (d, e) sits at u=d, z=l_zd, x=l_xe, v=e, up=e.
    std::vector<cd> out = verify::teleport_closed_form(fixed_labels(), {1.0, 0.0});
    ASSERT_EQ(out.size(), 128u);
    EXPECT_NEAR(out[0b0011100].real(), 0.5, 1e-15);  // d=0 e=0
    EXPECT_NEAR(out[0b0010011].real(), 0.5, 1e-15);  // d=0 e=1
    EXPECT_NEAR(out[0b1101100].real(), 0.5, 1e-15);  // d=1 e=0
    EXPECT_NEAR(out[0b1100011].real(), 0.5, 1e-15);  // d=1 e=1
    double norm = 0;
    for (cd a : out) norm += std::norm(a);
    EXPECT_NEAR(norm, 1.0, 1e-15);
}

TEST(verify, twirl_holds_for_bell_side_pair) {
    const double h = 1.0 / std::sqrt(2.0);
    EXPECT_LE(verify::twirl_distance(fixed_labels(), {h, 0, 0, h}), 1e-12);
    TeleportParams same = fixed_labels();
    same.lx1 = same.lx0;
    EXPECT_LE(verify::twirl_distance(same, {0.6, 0, 0.8, 0}), 1e-12);
}

TEST(verify, residue_negative_control_separates_shapes) {
    Circuit a = parse_circuit("qgc-circuit v1\ninputs 1\noutputs 1\ngate X in=in0 out=out0\n");
    Circuit b = parse_circuit("qgc-circuit v1\ninputs 1\noutputs 1\ngate X in=in0 out=a\ngate I in=a out=out0\n");
    QuantumState zero = QuantumState::zeros(RegisterMap{{"in0", 1}});
    Rng rng(3);
    verify::ResidueEstimate e = verify::residue_distance(a, zero, b, zero, 50, rng);
    EXPECT_EQ(e.distance, 1.0);
    EXPECT_LE(e.output_error, 1e-9);
}

TEST(verify, residue_same_shape_is_close) {
    Circuit a = parse_circuit("qgc-circuit v1\ninputs 1\noutputs 1\ngate X in=in0 out=out0\n");
    Circuit b = parse_circuit("qgc-circuit v1\ninputs 1\noutputs 1\ngate H in=in0 out=out0\n");
    // H |-> = |1>, matching X |0>.
    QuantumState minus = QuantumState::zeros(RegisterMap{{"in0", 1}});
    minus.apply(gates::X(), {{"in0", 0}});
    minus.apply(gates::H(), {{"in0", 0}});
    Rng rng(4);
    verify::ResidueEstimate e = verify::residue_distance(a, QuantumState::zeros(RegisterMap{{"in0", 1}}), b, minus, 400, rng);
    EXPECT_LE(e.distance, 0.12);
    EXPECT_LE(e.output_error, 1e-9);
}

TEST(verify, fast_suites_pass_and_report) {
    verify::Config cfg;
    cfg.seed = 9;
    std::vector<verify::SuiteReport> r = verify::run("twirl", cfg);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_TRUE(r[0].pass());
    EXPECT_EQ(r[0].checks.size(), 2u);
    std::vector<verify::SuiteReport> g = verify::run("gr", cfg);
    EXPECT_TRUE(g[0].pass());
    std::string text = verify::format_report(r, cfg);
    EXPECT_NE(text.find("seed=9 "), std::string::npos);
    EXPECT_NE(text.find("suite=twirl check=twirl/kappa=1 "), std::string::npos);
    EXPECT_NE(text.find("suite=twirl pass=1 checks=2 failed=0"), std::string::npos);
}

TEST(verify, unknown_suite_is_rejected) {
    EXPECT_THROW(verify::run("nope", verify::Config{}), Error);
    EXPECT_EQ(verify::suite_names().size(), 6u);
}

TEST(verify, same_seed_same_checks) {
    verify::Config cfg;
    cfg.seed = 12;
    auto a = verify::twirl_checks(cfg);
    auto b = verify::twirl_checks(cfg);
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); i++) EXPECT_EQ(a[i].value, b[i].value);
}
