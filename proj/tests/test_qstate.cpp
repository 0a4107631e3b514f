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

#include "qgc/qstate.hpp"

using namespace qgc;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

RegisterMap one(const std::string& a) {
    RegisterMap r;
    r.add(a, 1);
    return r;
}

QuantumState random_state(int n, Rng& rng) {
    RegisterMap regs;
    for (int i = 0; i < n; i++) regs.add("q" + std::to_string(i), 1);
    std::vector<cd> a(size_t{1} << n);
    double nn = 0;
    for (auto& v : a) {
        v = {rng.normal(), rng.normal()};
        nn += std::norm(v);
    }
    for (auto& v : a) v /= std::sqrt(nn);
    return QuantumState::from_amplitudes(regs, a);
}
}  // namespace

TEST(qstate, zeros_and_epr) {
    QuantumState z = make_state(one("a"), {RegisterInit::zeros("a")});
    EXPECT_NEAR(std::abs(z.amplitude(0) - cd(1)), 0, 1e-15);

    RegisterMap vu{{"v", 1}, {"u", 1}};
    QuantumState e = make_state(vu, {RegisterInit::epr("v", "u")});
    EXPECT_NEAR(e.amplitude(0).real(), kInvSqrt2, 1e-15);
    EXPECT_NEAR(std::abs(e.amplitude(1)), 0, 1e-15);
    EXPECT_NEAR(std::abs(e.amplitude(2)), 0, 1e-15);
    EXPECT_NEAR(e.amplitude(3).real(), kInvSqrt2, 1e-15);
}

TEST(qstate, hadamard_on_first_of_two) {
    RegisterMap ab{{"a", 1}, {"b", 1}};
    QuantumState s = make_state(ab, {RegisterInit::zeros("a"), RegisterInit::zeros("b")});
    s = apply_unitary(s, gates::H(), {{"a", 0}});
    const double want[4] = {kInvSqrt2, 0, kInvSqrt2, 0};
    for (int i = 0; i < 4; i++) EXPECT_NEAR(std::abs(s.amplitude(i) - cd(want[i])), 0, 1e-15);
}

TEST(qstate, basic_gates) {
    QuantumState s = make_state(one("a"), {RegisterInit::zeros("a")});
    s = apply_unitary(s, gates::X(), {{"a", 0}});
    EXPECT_NEAR(std::abs(s.amplitude(1)), 1.0, 1e-15);

    RegisterMap cb{{"c", 1}, {"t", 1}};
    QuantumState c = make_state(cb, {RegisterInit::amps("c", {0, 1}), RegisterInit::zeros("t")});
    c = apply_unitary(c, gates::CNOT(), {{"c", 0}, {"t", 0}});
    EXPECT_NEAR(std::abs(c.amplitude(3)), 1.0, 1e-15);

    QuantumState p = make_state(one("a"), {RegisterInit::amps("a", {kInvSqrt2, kInvSqrt2})});
    p = apply_unitary(p, gates::T(), {{"a", 0}});
    cd w = std::polar(kInvSqrt2, M_PI / 4);
    EXPECT_NEAR(std::abs(p.amplitude(0) - cd(kInvSqrt2)), 0, 1e-15);
    EXPECT_NEAR(std::abs(p.amplitude(1) - w), 0, 1e-15);
}

TEST(qstate, rejects_bad_targets) {
    RegisterMap ab{{"a", 1}, {"b", 1}};
    QuantumState s = QuantumState::zeros(ab);
    EXPECT_THROW(s.apply(gates::CNOT(), {{"a", 0}, {"a", 0}}), Error);
    EXPECT_THROW(s.apply(gates::X(), {{"a", 1}}), Error);
    EXPECT_THROW(s.apply(gates::X(), {{"zz", 0}}), Error);
}

TEST(qstate, qubit_cap_reports_size) {
    RegisterMap big;
    big.add("a", 23);
    try {
        QuantumState::zeros(big);
        FAIL();
    } catch (const BudgetError& e) {
        EXPECT_NE(std::string(e.what()).find("23"), std::string::npos);
    }
}

TEST(qstate, measure_deterministic_and_epr) {
    QuantumState one_state = make_state(one("a"), {RegisterInit::amps("a", {0, 1})});
    Rng rng(1);
    auto [m, post] = measure(one_state, {{"a", 0}}, &rng);
    EXPECT_EQ(m.outcome.to_string(), "1");
    EXPECT_NEAR(m.prob, 1.0, 1e-15);

    RegisterMap vu{{"v", 1}, {"u", 1}};
    QuantumState e = make_state(vu, {RegisterInit::epr("v", "u")});
    for (int b = 0; b < 2; b++) {
        Bits forced = Bits::from_uint(b, 1);
        auto [mb, pb] = measure(e, {{"v", 0}}, nullptr, &forced);
        EXPECT_NEAR(mb.prob, 0.5, 1e-12);
        Rng r2(b);
        auto [mu, pu] = measure(pb, {{"u", 0}}, &r2);
        EXPECT_EQ(int(mu.outcome[0]), b);
    }
    // Zero-probability replay branch is an error.
    Bits forced = Bits::from_uint(0, 1);
    EXPECT_THROW(measure(one_state, {{"a", 0}}, nullptr, &forced), Error);
}

TEST(qstate, measurement_completeness) {
    Rng rng(7);
    QuantumState s = random_state(3, rng);
    double total = 0;
    for (int o = 0; o < 4; o++) {
        Bits forced = Bits::from_uint(o, 2);
        total += measure(s, {{"q0", 0}, {"q2", 0}}, nullptr, &forced).first.prob;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(qstate, partial_trace_cases) {
    RegisterMap vu{{"v", 1}, {"u", 1}};
    QuantumState e = make_state(vu, {RegisterInit::epr("v", "u")});
    QuantumState tau = partial_trace(e, {"u"});
    EXPECT_NEAR(tau.rho(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(tau.rho(1, 1).real(), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(tau.rho(0, 1)), 0, 1e-15);

    QuantumState all = partial_trace(e, {"v", "u"});
    EXPECT_NEAR(trace_distance(all, e), 0, 1e-12);
    EXPECT_THROW(partial_trace(e, {"nope"}), Error);

    Rng rng(3);
    QuantumState f = random_state(1, rng);
    QuantumState q = make_state(one("q"), {RegisterInit::amps("q", {0.6, 0.8})});
    QuantumState prod = tensor(f, q);
    EXPECT_NEAR(trace_distance(partial_trace(prod, {"q0"}), f), 0, 1e-12);
}

TEST(qstate, partial_trace_linearity) {
    Rng rng(11);
    for (int trial = 0; trial < 10; trial++) {
        QuantumState a = random_state(3, rng), b = random_state(3, rng);
        double p = rng.uniform();
        QuantumState mix = mixture({{p, a}, {1 - p, b}});
        QuantumState lhs = partial_trace(mix, {"q0", "q2"});
        QuantumState rhs = mixture({{p, partial_trace(a, {"q0", "q2"})}, {1 - p, partial_trace(b, {"q0", "q2"})}});
        EXPECT_LE(trace_distance(lhs, rhs), 1e-10);
    }
}

TEST(qstate, trace_distance_oracles) {
    QuantumState z = make_state(one("a"), {RegisterInit::zeros("a")});
    QuantumState o = make_state(one("a"), {RegisterInit::amps("a", {0, 1})});
    QuantumState p = make_state(one("a"), {RegisterInit::amps("a", {kInvSqrt2, kInvSqrt2})});
    EXPECT_NEAR(trace_distance(z, z), 0, 1e-12);
    EXPECT_NEAR(trace_distance(z, o), 1, 1e-12);
    EXPECT_NEAR(trace_distance(z, p), 0.70710678118654752, 1e-12);
    EXPECT_NEAR(trace_distance(z.to_density(), p.to_density()), 0.70710678118654752, 1e-12);
}

TEST(qstate, norm_preserved_over_many_gates) {
    Rng rng(5);
    QuantumState s = random_state(4, rng);
    const GateMatrix gs[] = {gates::H(), gates::T(), gates::P(), gates::X()};
    for (int k = 0; k < 10000; k++) {
        int q = int(rng.below(4));
        if (rng.bit()) {
            s.apply(gs[rng.below(4)], {{"q" + std::to_string(q), 0}});
        } else {
            int q2 = (q + 1 + int(rng.below(3))) % 4;
            s.apply(gates::CNOT(), {{"q" + std::to_string(q), 0}, {"q" + std::to_string(q2), 0}});
        }
    }
    EXPECT_LE(std::abs(s.norm() - 1.0), 1e-9);
}

TEST(qstate, density_rank_one) {
    Rng rng(9);
    QuantumState d = random_state(2, rng).to_density();
    d.validate();
    // Purity tr(rho^2) = 1 exactly when the second eigenvalue vanishes.
    double purity = 0;
    for (const cd& v : d.data()) purity += std::norm(v);
    EXPECT_NEAR(purity, 1.0, 1e-9);
}

TEST(qstate, fanout_and_parity) {
    RegisterMap r{{"c", 1}, {"t", 3}};
    QuantumState s = make_state(r, {RegisterInit::amps("c", {0, 1}), RegisterInit::zeros("t")});
    s.fanout({"c", 0}, {{"t", 0}, {"t", 2}});
    EXPECT_NEAR(std::abs(s.amplitude(0b1101)), 1.0, 1e-15);
    s.parity({"c", 0}, {{"t", 0}, {"t", 1}});
    EXPECT_NEAR(std::abs(s.amplitude(0b0101)), 1.0, 1e-15);
}

TEST(qstate, dump_round_trip) {
    Rng rng(2);
    QuantumState s = random_state(2, rng);
    QuantumState back = parse_state(dump_state(s));
    EXPECT_LE(trace_distance(s, back), 1e-12);
    QuantumState d = s.to_density();
    EXPECT_LE(trace_distance(d, parse_state(dump_state(d))), 1e-12);
}
