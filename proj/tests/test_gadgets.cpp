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

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "qgc/gadgets.hpp"

using namespace qgc;

namespace {

std::vector<cd> random_qubit(Rng& rng) {
    cd a(rng.normal(), rng.normal()), b(rng.normal(), rng.normal());
    double n = std::sqrt(std::norm(a) + std::norm(b));
    return {a / n, b / n};
}

// Distinct labels so a measured bundle names its key.
TeleportParams distinct_params(int kappa, Rng& rng) {
    TeleportParams p = TeleportParams::sample(kappa, rng);
    while (p.lz1 == p.lz0) p.lz1 = rng.bits(kappa);
    while (p.lx1 == p.lx0) p.lx1 = rng.bits(kappa);
    return p;
}

QuantumState tp_input(int kappa, const std::vector<cd>& psi) {
    return make_state(gadget_registers(kappa, false, true),
                      {RegisterInit::amps("u", psi), RegisterInit::zeros("z"), RegisterInit::zeros("x"),
                       RegisterInit::epr("v", "up")});
}

// 1/2 sum_{d,e} Z^sz X^sx|d> |l_zd> |l_xe> Z^tz X^tx|e> X^e Z^d|psi>.
std::vector<cd> tp_closed_form(const TeleportParams& p, const std::vector<cd>& psi) {
    const int kappa = p.kappa();
    const int n = 2 * kappa + 3;
    std::vector<cd> out(size_t{1} << n, 0.0);
    for (int d = 0; d < 2; d++) {
        for (int e = 0; e < 2; e++) {
            int ub = d ^ p.sx, vb = e ^ p.tx;
            double sign = ((p.sz && ub) ? -1.0 : 1.0) * ((p.tz && vb) ? -1.0 : 1.0);
            uint64_t idx = uint64_t(ub);
            for (int j = 0; j < kappa; j++) idx = (idx << 1) | p.z_label(d).get(j);
            for (int j = 0; j < kappa; j++) idx = (idx << 1) | p.x_label(e).get(j);
            idx = (idx << 1) | uint64_t(vb);
            for (int y = 0; y < 2; y++) {
                int src = y ^ e;
                double ph = (d && src) ? -1.0 : 1.0;
                out[(idx << 1) | uint64_t(y)] += 0.5 * sign * ph * psi[src];
            }
        }
    }
    return out;
}

double max_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); i++) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<PXElement> all_cosets() {
    std::vector<PXElement> out;
    for (int a = 0; a < 2; a++) {
        for (int b = 0; b < 4; b++) out.push_back(PXElement::make(0, a, b));
    }
    return out;
}

double chi2_pvalue(const std::vector<int>& counts) {
    double total = 0;
    for (int c : counts) total += c;
    double expect = total / double(counts.size()), stat = 0;
    for (int c : counts) stat += (c - expect) * (c - expect) / expect;
    boost::math::chi_squared dist(double(counts.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST(gadgets, teleport_closed_form_example) {
    TeleportParams p = TeleportParams::from_labels(Bits::from_string("0"), Bits::from_string("1"),
                                                   Bits::from_string("0"), Bits::from_string("1"), 0, 0, 0, 0);
    QuantumState s = tp_input(1, {1.0, 0.0});
    apply_gate_list(s, tp_circuit(p));
    // Index bits: u z x v up. Branch (d, e) has |d d e e> X^e Z^d |0> = |d d e e e>.
    for (int d = 0; d < 2; d++) {
        for (int e = 0; e < 2; e++) {
            size_t idx = size_t(d) << 4 | size_t(d) << 3 | size_t(e) << 2 | size_t(e) << 1 | size_t(e);
            EXPECT_NEAR(std::abs(s.amplitude(idx) - cd(0.5)), 0.0, 1e-12);
        }
    }
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
}

TEST(gadgets, teleport_closed_form_random) {
    Rng rng(101);
    for (int kappa = 1; kappa <= 2; kappa++) {
        for (int trial = 0; trial < 50; trial++) {
            TeleportParams p = TeleportParams::sample(kappa, rng);
            auto psi = random_qubit(rng);
            QuantumState s = tp_input(kappa, psi);
            apply_gate_list(s, tp_circuit(p));
            ASSERT_LE(max_diff(s.data(), tp_closed_form(p, psi)), 1e-10);
        }
    }
}

TEST(gadgets, equal_z_labels_carry_nothing) {
    Rng rng(5);
    TeleportParams p = TeleportParams::sample(2, rng);
    p.lz1 = p.lz0;
    QuantumState s = tp_input(2, random_qubit(rng));
    apply_gate_list(s, tp_circuit(p));
    QuantumState z = partial_trace(s, {"z"});
    size_t idx = p.lz0.read_uint(0, 2);
    EXPECT_NEAR(z.rho(idx, idx).real(), 1.0, 1e-12);
}

TEST(gadgets, measured_bundles_recover_state) {
    Rng rng(77);
    for (int trial = 0; trial < 200; trial++) {
        int kappa = 1 + trial % 2;
        TeleportParams p = distinct_params(kappa, rng);
        auto psi = random_qubit(rng);
        QuantumState s = tp_input(kappa, psi);
        apply_gate_list(s, tp_circuit(p));
        std::vector<QubitAddr> targets;
        for (int j = 0; j < kappa; j++) targets.push_back({"z", j});
        for (int j = 0; j < kappa; j++) targets.push_back({"x", j});
        MeasureResult m = s.measure(targets, &rng);
        int d = m.outcome.slice(0, kappa) == p.lz1;
        int e = m.outcome.slice(kappa, kappa) == p.lx1;
        ASSERT_EQ(m.outcome.slice(0, kappa), p.z_label(d));
        if (e) s.apply(gates::X(), {{"up", 0}});
        if (d) s.apply(gates::Z(), {{"up", 0}});
        QuantumState out = partial_trace(s, {"up"});
        RegisterMap one{{"up", 1}};
        QuantumState want = make_state(one, {RegisterInit::amps("up", psi)});
        ASSERT_NEAR(fidelity(out, want), 1.0, 1e-10);
    }
}

TEST(gadgets, classical_teleport_truth_table) {
    Rng rng(6);
    TeleportParams p = distinct_params(2, rng);
    p.sx = p.tx = 0;
    ClassicalTpOutput z = classical_tp_eval(p, false, false);
    EXPECT_FALSE(z.u);
    EXPECT_EQ(z.z, p.lz0);
    EXPECT_EQ(z.x, p.lx0);
    EXPECT_FALSE(z.v);
    EXPECT_FALSE(z.up);
    ClassicalTpOutput one = classical_tp_eval(p, true, false);
    EXPECT_EQ(one.x, p.lx1);
    EXPECT_TRUE(one.v);
    EXPECT_FALSE(one.up);

    for (int trial = 0; trial < 8; trial++) {
        TeleportParams q = TeleportParams::sample(2, rng);
        for (int y = 0; y < 2; y++) {
            for (int r = 0; r < 2; r++) {
                ClassicalTpOutput o = classical_tp_eval(q, y, r);
                // Gate list on a basis input gives the same bits.
                RegisterMap regs = gadget_registers(2, false, true);
                SparseState s(regs);
                uint64_t idx = (uint64_t(y) << 6) | (uint64_t(r) << 1) | uint64_t(r);
                s = SparseState::basis(regs, idx);
                s.apply(classical_tp_circuit(q));
                ASSERT_EQ(s.amps().size(), 1u);
                uint64_t out = s.amps().begin()->first;
                uint64_t want = uint64_t(o.u);
                for (int j = 0; j < 2; j++) want = (want << 1) | o.z.get(j);
                for (int j = 0; j < 2; j++) want = (want << 1) | o.x.get(j);
                want = (want << 2) | (uint64_t(o.v) << 1) | uint64_t(o.up);
                ASSERT_EQ(out, want);
                for (const auto& g : classical_tp_circuit(q)) {
                    if (g.kind == GateOp::Kind::kUnitary) {
                        ASSERT_TRUE(g.name == "X" || g.name == "CNOT");
                    }
                }

                // The quantum gadget on a pre-measured pair agrees on x, v and up.
                QuantumState qs = make_state(
                    regs, {RegisterInit::amps("u", y ? std::vector<cd>{0, 1} : std::vector<cd>{1, 0}),
                           RegisterInit::zeros("z"), RegisterInit::zeros("x"),
                                       RegisterInit::amps("v", r ? std::vector<cd>{0, 1} : std::vector<cd>{1, 0}),
                                       RegisterInit::amps("up", r ? std::vector<cd>{0, 1} : std::vector<cd>{1, 0})});
                apply_gate_list(qs, tp_circuit(q));
                QuantumState tail = partial_trace(qs, {"x", "v", "up"});
                size_t ti = (o.x.read_uint(0, 2) << 2) | (size_t(o.v) << 1) | size_t(o.up);
                ASSERT_NEAR(tail.rho(ti, ti).real(), 1.0, 1e-12);
            }
        }
    }
}

TEST(gadgets, gamma_pairs) {
    auto g = gamma(true, Bits::from_string("1"));
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g[0].first, b_qubit(1, 0, 1));
    EXPECT_EQ(g[0].second, b_qubit(1, 1, 0));
    EXPECT_TRUE(gamma(false, Bits::from_string("111")).empty());
    EXPECT_EQ(gamma(true, Bits::from_string("111")).size(), 6u);
    auto h = gamma(true, Bits::from_string("101"));
    ASSERT_EQ(h.size(), 3u);
    EXPECT_EQ(h[2].first, b_qubit(3, 1, 3));
    EXPECT_EQ(h[2].second, b_qubit(3, 3, 1));
}

TEST(gadgets, c2_trivial_is_identity) {
    for (int kappa = 1; kappa <= 3; kappa++) {
        EXPECT_EQ(c2(PXElement::identity(), Bits(kappa), 0, 0), RandomizerElement::identity(kappa));
        Bits ones(kappa);
        for (int j = 0; j < kappa; j++) ones.set(j, true);
        EXPECT_EQ(c2(PXElement::identity(), ones, 0, 0), RandomizerElement::identity(kappa));
    }
}

TEST(gadgets, c_identity_exhaustive) {
    double worst = 0.0;
    for (int kappa = 1; kappa <= 3; kappa++) {
        for (uint64_t rv = 0; rv < (uint64_t{1} << kappa); rv++) {
            Bits r = Bits::from_uint(rv, kappa);
            for (const auto& R : all_cosets()) {
                for (int s = 0; s < 4; s++) worst = std::max(worst, c_identity_distance(R, r, s >> 1, s & 1));
            }
        }
    }
    EXPECT_LE(worst, 1e-10);
}

TEST(gadgets, c_identity_detects_a_wrong_layer) {
    Bits r = Bits::from_string("11");
    PXElement R = PXElement::make(0, 0, 1);
    RandomizerElement bad = c2(R, r, 0, 0);
    bad.pairs[RandomizerElement::pair_index(2, 0, 1)] = Tableau(2);
    RegisterMap regs{{"u", 1}, {"z", 2}, {"b", 9}};
    GateList lhs{GateOp::unitary("R", R.matrix(), {{"u", 0}}), GateOp::unitary("H", gates::H(), {{"u", 0}}),
                 GateOp::fanout({"u", 0}, {{"z", 0}, {"z", 1}})};
    GateList rhs = c1(r);
    for (auto& g : randomizer_circuit(bad)) rhs.push_back(g);
    for (auto& g : c3(2)) rhs.push_back(g);
    EXPECT_GT(gate_list_distance(regs, lhs, rhs, {"b"}), 0.5);
}

TEST(gadgets, lambda_identity_exhaustive) {
    Rng rng(33);
    double worst = 0.0;
    for (int kappa = 1; kappa <= 3; kappa++) {
        TeleportParams p = TeleportParams::sample(kappa, rng);
        for (const auto& R : all_cosets()) {
            for (int st = 0; st < 16; st++) {
                p.sz = st >> 3 & 1;
                p.sx = st >> 2 & 1;
                p.tz = st >> 1 & 1;
                p.tx = st & 1;
                worst = std::max(worst, lambda_identity_distance(R, p));
            }
        }
    }
    EXPECT_LE(worst, 1e-10);
}

TEST(gadgets, lambda_identity_random_labels) {
    Rng rng(34);
    PXElement xzp = PXElement::make(0, 1, 3);
    for (int trial = 0; trial < 20; trial++) {
        TeleportParams p = TeleportParams::sample(2, rng);
        ASSERT_LE(lambda_identity_distance(xzp, p), 1e-10);
    }
}

TEST(gadgets, lambda_trivial_correction) {
    Rng rng(35);
    TeleportParams p = TeleportParams::sample(2, rng);
    p.sz = p.sx = p.tz = p.tx = 0;
    EXPECT_EQ(lambda2(PXElement::identity(), p), RandomizerElement::identity(2));
    EXPECT_LE(lambda_identity_distance(PXElement::identity(), p), 1e-12);
}

TEST(gadgets, gamma_phase_law_exhaustive) {
    for (int kappa = 1; kappa <= 3; kappa++) {
        for (uint64_t rv = 0; rv < (uint64_t{1} << kappa); rv++) {
            EXPECT_TRUE(gamma_phase_law(Bits::from_uint(rv, kappa))) << kappa << " " << rv;
        }
    }
}

TEST(gadgets, correction_gadget_round_trip) {
    Rng rng(12);
    EXPECT_EQ(gadget_encoding_length(1), 32u + 50u);
    TeleportParams p0 = TeleportParams::sample(2, rng);
    p0.sz = p0.sx = p0.tz = p0.tx = 0;
    EXPECT_EQ(corr_gadget(RandomizerElement::identity(2), PXElement::identity(), p0), RandomizerElement::identity(2));
    for (int trial = 0; trial < 1000; trial++) {
        int kappa = 1 + trial % 3;
        RandomizerElement g = sample_randomizer(kappa, rng);
        Bits enc = encode_gadget(g);
        ASSERT_EQ(enc.size(), gadget_encoding_length(kappa));
        ASSERT_EQ(parse_corr(enc, kappa), g);
    }
    Bits enc = encode_gadget(RandomizerElement::identity(1));
    enc.flip(31);
    EXPECT_THROW(parse_corr(enc, 1), ParseError);
    int bad = 0;
    parse_corr_lenient(enc, 1, &bad);
    EXPECT_EQ(bad, 1);
    EXPECT_THROW(parse_corr(encode_gadget(RandomizerElement::identity(1)), 2), ParseError);
}

TEST(gadgets, correction_gadget_is_uniform) {
    Rng rng(13);
    TeleportParams p = TeleportParams::sample(1, rng);
    PXElement R = PXElement::make(0, 1, 1);
    std::vector<int> u(24, 0), b00(24, 0);
    int pair_identity = 0;
    const int n = 4800;
    for (int k = 0; k < n; k++) {
        RandomizerElement g = corr_gadget(sample_randomizer(1, rng), R, p);
        u[g.singles[RandomizerElement::slot_u()]]++;
        b00[g.singles[RandomizerElement::slot_bdiag(1, 0)]]++;
        if (g.pairs[0] == Tableau(2)) pair_identity++;
    }
    EXPECT_GT(chi2_pvalue(u), 0.001);
    EXPECT_GT(chi2_pvalue(b00), 0.001);
    // 11520 two-qubit classes: the identity should almost never appear.
    EXPECT_LE(pair_identity, 5);
}

TEST(gadgets, correction_residues) {
    UniversalGate t = UniversalGate::named("T");
    UniversalGate id = UniversalGate::named("I");
    EXPECT_TRUE(correction_residues(id, 0)[0].same_coset(PXElement::identity()));
    // (z, x) = (0, 1): the key X comes out of T as P X, which R undoes.
    PXElement px = PXElement::make(0, 0, 1) * PXElement::make(0, 1, 0);
    EXPECT_TRUE(correction_residues(t, 1)[0].same_coset(px.inverse()));
    for (const char* name : {"T", "H", "P", "X", "CNOT", "CZ", "SWAP"}) {
        UniversalGate g = UniversalGate::named(name);
        const int p = g.arity;
        for (uint64_t w = 0; w < (uint64_t{1} << (2 * p)); w++) {
            Pauli key;
            for (int j = 0; j < p; j++) {
                key.z |= uint32_t((w >> (2 * p - 1 - 2 * j)) & 1) << j;
                key.x |= uint32_t((w >> (2 * p - 2 - 2 * j)) & 1) << j;
            }
            auto R = correction_residues(g, w);
            GateMatrix corr = R[0].matrix();
            for (int j = 1; j < p; j++) corr = corr.kron(R[j].matrix());
            GateMatrix lhs = corr * g.matrix() * key.matrix(p);
            ASSERT_LE(lhs.phase_distance(g.matrix()), 1e-12) << name << " " << w;
        }
    }
}

TEST(gadgets, correction_function_table) {
    Rng rng(14);
    UniversalGate id = UniversalGate::named("I");
    TeleportParams p0 = TeleportParams::sample(1, rng);
    p0.sz = p0.sx = p0.tz = p0.tx = 0;
    FnSignature f0 = correction_fn(id, {RandomizerElement::identity(1)}, {p0});
    EXPECT_EQ(f0.n_in, 2);
    EXPECT_EQ(f0.m_out, gadget_encoding_length(1));
    EXPECT_EQ(f0.table[0], encode_gadget(RandomizerElement::identity(1)));

    RegisterMap regs = gadget_registers(1, true, false);
    for (const char* name : {"T", "H", "CNOT"}) {
        UniversalGate g = UniversalGate::named(name);
        std::vector<RandomizerElement> A;
        std::vector<TeleportParams> tp;
        for (int j = 0; j < g.arity; j++) {
            A.push_back(sample_randomizer(1, rng));
            tp.push_back(TeleportParams::sample(1, rng));
        }
        FnSignature f = correction_fn(g, A, tp);
        ASSERT_EQ(f.m_out, g.arity * gadget_encoding_length(1));
        for (uint64_t w = 0; w < f.table.size(); w++) {
            auto R = correction_residues(g, w);
            for (int j = 0; j < g.arity; j++) {
                RandomizerElement parsed =
                    parse_corr(f.table[w].slice(j * gadget_encoding_length(1), gadget_encoding_length(1)), 1);
                GateList want = randomizer_circuit(randomizer_inverse(A[j]));
                for (auto& op : randomizer_circuit(lambda2(R[j], tp[j]))) want.push_back(op);
                ASSERT_LE(gate_list_distance(regs, randomizer_circuit(parsed), want, {}), 1e-10);
            }
        }
    }
    EXPECT_THROW(correction_fn(UniversalGate::named("CNOT"), {RandomizerElement::identity(1)}, {p0}), Error);
}

TEST(gadgets, compressed_teleport_branches) {
    Rng rng(15);
    TeleportParams p = distinct_params(1, rng);
    RegisterMap one{{"data", 1}};
    for (int d = 0; d < 2; d++) {
        for (int e = 0; e < 2; e++) {
            QuantumState s = QuantumState::zeros(one);
            TeleportOutcome o = compressed_teleport(s, "data", p, nullptr, std::make_pair(d, e));
            EXPECT_DOUBLE_EQ(o.prob, 0.25);
            EXPECT_EQ(o.z_label, p.z_label(d));
            EXPECT_EQ(o.x_label, p.x_label(e));
            EXPECT_NEAR(std::abs(s.amplitude(e)), 1.0, 1e-12);
        }
    }
    std::vector<int> counts(4, 0);
    for (int k = 0; k < 4000; k++) {
        QuantumState s = QuantumState::zeros(one);
        TeleportOutcome o = compressed_teleport(s, "data", p, &rng);
        counts[2 * o.d + o.e]++;
    }
    EXPECT_GT(chi2_pvalue(counts), 0.001);
}

TEST(gadgets, compressed_matches_explicit_with_reference) {
    Rng rng(16);
    const double h = 1.0 / std::sqrt(2.0);
    for (int trial = 0; trial < 10; trial++) {
        TeleportParams p = distinct_params(1, rng);
        // Reference qubit entangled with the data: a|00> + b|11> + c|01>.
        auto psi = random_qubit(rng);
        std::vector<cd> pair = {psi[0] * h, psi[1] * 0.5, 0.0, psi[1] * 0.5 * std::sqrt(2.0)};
        double nrm = 0;
        for (auto& a : pair) nrm += std::norm(a);
        for (auto& a : pair) a /= std::sqrt(nrm);

        RegisterMap full{{"ref", 1}, {"u", 1}, {"z", 1}, {"x", 1}, {"v", 1}, {"up", 1}};
        for (int d = 0; d < 2; d++) {
            for (int e = 0; e < 2; e++) {
                // Explicit: gadget, then forced measurement of the bundles.
                RegisterMap ru{{"ref", 1}, {"u", 1}};
                QuantumState base = QuantumState::from_amplitudes(ru, pair);
                RegisterMap rest{{"z", 1}, {"x", 1}};
                QuantumState ex = tensor(tensor(base, QuantumState::zeros(rest)),
                                         make_state(RegisterMap{{"v", 1}, {"up", 1}}, {RegisterInit::epr("v", "up")}));
                apply_gate_list(ex, tp_circuit(p));
                Bits forced = p.z_label(d);
                forced.append(p.x_label(e));
                MeasureResult m = ex.measure({{"z", 0}, {"x", 0}}, nullptr, &forced);
                ASSERT_NEAR(m.prob, 0.25, 1e-12);
                QuantumState ex_out = partial_trace(ex, {"ref", "up"});

                // Compressed: keys applied to the data qubit directly.
                QuantumState cs = QuantumState::from_amplitudes(ru, pair);
                TeleportOutcome o = compressed_teleport(cs, "u", p, nullptr, std::make_pair(d, e));
                cs.rename("u", "up");
                ASSERT_NEAR(o.prob, m.prob, 1e-12);
                ASSERT_LE(trace_distance(ex_out, cs.to_density()), 1e-10);
            }
        }
    }
}

TEST(gadgets, depth_counts_fanout_as_one_layer) {
    EXPECT_EQ(gate_list_depth(c1(Bits::from_string("111"))), 3);
    EXPECT_EQ(gate_list_depth(randomizer_circuit(RandomizerElement::identity(2))), 0);
    Rng rng(1);
    EXPECT_EQ(gate_list_depth(randomizer_circuit(sample_randomizer(3, rng))), 1);
    std::string text = print_gate_list(tp_circuit(distinct_params(1, rng)));
    EXPECT_NE(text.find("gate CNOT u[0] v[0]"), std::string::npos) << text;
}
