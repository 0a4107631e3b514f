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

#include "qgc/circuit.hpp"

using namespace qgc;

#ifndef QGC_DATA_DIR
#define QGC_DATA_DIR "data"
#endif

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::string parse_error_text(const std::string& text) {
    try {
        parse_circuit(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

QuantumState plus_on(const std::string& name) {
    RegisterMap r;
    r.add(name, 1);
    return make_state(r, {RegisterInit::amps(name, {kInvSqrt2, kInvSqrt2})});
}
}  // namespace

TEST(circuit, one_line_file) {
    Circuit c = parse_circuit("qgc-circuit v1\ninputs 1\noutputs 1\ngate T in=w0 out=w1\n");
    EXPECT_EQ(c.topo.num_gates(), 1);
    EXPECT_EQ(c.topo.num_wires(), 2);
    EXPECT_TRUE(c.gates[0].is_t);
}

TEST(circuit, out_degree_violation) {
    std::string err = parse_error_text(
        "qgc-circuit v1\ninputs 2\noutputs 2\n"
        "gate H in=in0 out=a\ngate X in=a out=out0\ngate Z in=a out=out1\n");
    EXPECT_NE(err.find("out-degree violation"), std::string::npos) << err;
}

TEST(circuit, other_diagnostics) {
    EXPECT_NE(parse_error_text("qgc-circuit v1\ninputs 1\noutputs 1\ngate Q in=in0 out=out0\n").find("unknown gate"),
              std::string::npos);
    EXPECT_NE(parse_error_text("qgc-circuit v1\ninputs 1\noutputs 1\ngate CNOT in=in0 out=out0\n").find("arity"),
              std::string::npos);
    // Two gates feeding each other.
    std::string cyc = parse_error_text(
        "qgc-circuit v1\ninputs 1\noutputs 1\ngate H in=in0,b out=a,out0\ngate X in=a out=b\n");
    EXPECT_FALSE(cyc.empty());
    std::string dangling = parse_error_text("qgc-circuit v1\ninputs 1\noutputs 1\ngate H in=in0 out=out0\ngate X in=q out=r\n");
    EXPECT_NE(dangling.find("dangling"), std::string::npos) << dangling;
    // Diagnostics carry line numbers.
    EXPECT_NE(parse_error_text("qgc-circuit v1\ninputs 1\noutputs 1\nbogus\n").find("line 4"), std::string::npos);
}

TEST(circuit, sample_file_wire_count) {
    Circuit c = load_circuit_file(std::string(QGC_DATA_DIR) + "/sample.qgc");
    EXPECT_EQ(c.topo.num_gates(), 3);
    EXPECT_EQ(c.topo.num_wires(), 7);
}

TEST(circuit, print_parse_round_trip) {
    Circuit c = load_circuit_file(std::string(QGC_DATA_DIR) + "/sample.qgc");
    Circuit back = parse_circuit(print_circuit(c));
    EXPECT_EQ(print_circuit(back), print_circuit(c));
    EXPECT_TRUE(back.topo.same_shape(c.topo));
    Rng rng(4);
    for (int k = 0; k < 30; k++) {
        RandomCircuitOptions opt;
        opt.inputs = 3;
        opt.gates = 4;
        opt.zero_inputs = int(rng.below(2));
        opt.discards = int(rng.below(2));
        Circuit r = random_circuit(opt, rng);
        Circuit rb = parse_circuit(print_circuit(r));
        EXPECT_EQ(print_circuit(rb), print_circuit(r));
        for (size_t g = 0; g < r.gates.size(); g++) EXPECT_TRUE(rb.gates[g] == r.gates[g]);
    }
}

TEST(circuit, evaluation_orders) {
    Circuit chain = parse_circuit(
        "qgc-circuit v1\ninputs 1\noutputs 1\ngate H in=in0 out=a\ngate T in=a out=b\ngate X in=b out=out0\n");
    EXPECT_EQ(evaluation_order(chain.topo), (std::vector<int>{0, 1, 2}));
    // Declared in reverse of dependency order.
    Circuit rev = parse_circuit(
        "qgc-circuit v1\ninputs 1\noutputs 1\ngate X in=b out=out0\ngate T in=a out=b\ngate H in=in0 out=a\n");
    EXPECT_EQ(evaluation_order(rev.topo), (std::vector<int>{2, 1, 0}));
    Circuit indep = parse_circuit(
        "qgc-circuit v1\ninputs 2\noutputs 2\ngate H in=in1 out=out1\ngate T in=in0 out=out0\n");
    EXPECT_EQ(evaluation_order(indep.topo), (std::vector<int>{0, 1}));
    Circuit diamond = parse_circuit(
        "qgc-circuit v1\ninputs 2\noutputs 2\ngate H in=in0 out=a\ngate CNOT in=a,in1 out=b,c\n"
        "gate T in=b out=d\ngate X in=c out=e\ngate CZ in=d,e out=out0,out1\n");
    auto order = evaluation_order(diamond.topo);
    EXPECT_TRUE(is_topological(diamond.topo, order));
    EXPECT_EQ(order, (std::vector<int>{0, 1, 2, 3, 4}));
    EXPECT_FALSE(is_topological(diamond.topo, {1, 0, 2, 3, 4}));
}

TEST(circuit, io_bijection_cases) {
    Circuit one = parse_circuit("qgc-circuit v1\ninputs 1\noutputs 1\ngate T in=in0 out=out0\n");
    EXPECT_EQ(io_bijection(one.topo), (std::vector<int>{0}));
    Circuit crossed = parse_circuit(
        "qgc-circuit v1\ninputs 2\noutputs 2\ngate H in=in0 out=out1\ngate H in=in1 out=out0\n");
    EXPECT_EQ(io_bijection(crossed.topo), (std::vector<int>{1, 0}));
    Circuit wires = parse_circuit("qgc-circuit v1\ninputs 2\noutputs 2\nconnect in0 out0\nconnect in1 out1\n");
    EXPECT_EQ(io_bijection(wires.topo), (std::vector<int>{0, 1}));

    Rng rng(8);
    for (int k = 0; k < 100; k++) {
        RandomCircuitOptions opt;
        opt.inputs = 1 + int(rng.below(4));
        opt.gates = int(rng.below(5));
        Circuit c = random_circuit(opt, rng);
        auto xi = io_bijection(c.topo);
        std::vector<int> inv(xi.size(), -1);
        for (size_t i = 0; i < xi.size(); i++) inv[xi[i]] = int(i);
        for (size_t i = 0; i < xi.size(); i++) EXPECT_EQ(inv[xi[i]], int(i));
    }
}

TEST(circuit, empty_circuit_keeps_shape) {
    Circuit c = load_circuit_file(std::string(QGC_DATA_DIR) + "/sample.qgc");
    Circuit e = empty_circuit(c.topo);
    EXPECT_TRUE(e.topo.same_shape(c.topo));
    EXPECT_EQ(e.gates[0].name, "I");
    EXPECT_EQ(e.gates[2].arity, 2);
}

TEST(circuit, reference_identity_and_t) {
    Circuit id = parse_circuit("qgc-circuit v1\ninputs 1\noutputs 1\ngate I in=in0 out=out0\n");
    QuantumState psi = make_state(RegisterMap{{"in0", 1}}, {RegisterInit::amps("in0", {0.6, cd(0, 0.8)})});
    QuantumState out = reference_evaluate(id, psi);
    EXPECT_EQ(out.regs().names(), (std::vector<std::string>{"out0"}));
    EXPECT_NEAR(std::abs(out.amplitude(1) - cd(0, 0.8)), 0, 1e-15);

    Circuit t = parse_circuit("qgc-circuit v1\ninputs 1\noutputs 1\ngate T in=in0 out=out0\n");
    QuantumState r = reference_evaluate(t, plus_on("in0"));
    EXPECT_NEAR(std::abs(r.amplitude(0) - cd(kInvSqrt2)), 0, 1e-15);
    EXPECT_NEAR(std::abs(r.amplitude(1) - std::polar(kInvSqrt2, M_PI / 4)), 0, 1e-15);
}

TEST(circuit, reference_discard_and_zero) {
    // CNOT with the target as a zero input, then the target discarded.
    Circuit c = parse_circuit(
        "qgc-circuit v1\ninputs 2\noutputs 2\nzero 1\ndiscard 1\ngate CNOT in=in0,in1 out=out0,out1\n");
    QuantumState out = reference_evaluate(c, plus_on("in0"));
    EXPECT_FALSE(out.is_pure());
    EXPECT_NEAR(out.rho(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(out.rho(0, 1)), 0, 1e-15);
    EXPECT_THROW(reference_evaluate(c, make_state(RegisterMap{{"in0", 1}, {"in1", 1}}, {})), Error);
}

TEST(circuit, reference_carries_side_registers) {
    Circuit h = parse_circuit("qgc-circuit v1\ninputs 1\noutputs 1\ngate H in=in0 out=out0\n");
    QuantumState e = make_state(RegisterMap{{"ref", 1}, {"in0", 1}}, {RegisterInit::epr("ref", "in0")});
    QuantumState out = reference_evaluate(h, e);
    EXPECT_EQ(out.regs().names(), (std::vector<std::string>{"ref", "out0"}));
    // (I ⊗ H)|Φ+> = (|0+> + |1->)/√2.
    EXPECT_NEAR(out.amplitude(0).real(), 0.5, 1e-15);
    EXPECT_NEAR(out.amplitude(3).real(), -0.5, 1e-15);
}

TEST(circuit, reference_preserves_norm) {
    Rng rng(21);
    for (int k = 0; k < 20; k++) {
        RandomCircuitOptions opt;
        opt.inputs = 3;
        opt.gates = 5;
        Circuit c = random_circuit(opt, rng);
        RegisterMap r{{"in0", 1}, {"in1", 1}, {"in2", 1}};
        std::vector<cd> a(8);
        double nn = 0;
        for (auto& v : a) {
            v = {rng.normal(), rng.normal()};
            nn += std::norm(v);
        }
        for (auto& v : a) v /= std::sqrt(nn);
        QuantumState out = reference_evaluate(c, QuantumState::from_amplitudes(r, a));
        EXPECT_LE(std::abs(out.norm() - 1.0), 1e-10);
    }
}

TEST(circuit, tableau_matches_dense_evaluation) {
    Rng rng(33);
    for (int k = 0; k < 20; k++) {
        RandomCircuitOptions opt;
        opt.inputs = 2;
        opt.gates = 4;
        opt.clifford_only = true;
        Circuit c = random_circuit(opt, rng);
        Tableau tab = circuit_tableau(c);
        GateMatrix u = tab.matrix();
        // Columns of the dense evaluation against the tableau unitary.
        GateMatrix v;
        v.arity = 2;
        v.m.assign(16, 0);
        for (int col = 0; col < 4; col++) {
            QuantumState basis = QuantumState::zeros(RegisterMap{{"in0", 1}, {"in1", 1}});
            if (col & 2) basis.apply(gates::X(), {{"in0", 0}});
            if (col & 1) basis.apply(gates::X(), {{"in1", 0}});
            QuantumState out = reference_evaluate(c, basis);
            for (int row = 0; row < 4; row++) v.m[row * 4 + col] = out.amplitude(row);
        }
        EXPECT_LE(u.phase_distance(v), 1e-10) << print_circuit(c);
    }
    Circuit t = parse_circuit("qgc-circuit v1\ninputs 1\noutputs 1\ngate T in=in0 out=out0\n");
    EXPECT_THROW(circuit_tableau(t), Error);
}

TEST(circuit, random_circuit_requires_t) {
    Rng rng(1);
    RandomCircuitOptions opt;
    opt.inputs = 2;
    opt.gates = 3;
    opt.require_t = true;
    for (int k = 0; k < 20; k++) {
        Circuit c = random_circuit(opt, rng);
        EXPECT_FALSE(is_clifford_circuit(c));
    }
}
