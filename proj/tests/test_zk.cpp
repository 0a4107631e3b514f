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

#include <set>

#include "qgc/stats.hpp"
#include "qgc/zk.hpp"

using namespace qgc;
using namespace qgc::zk;

namespace {

QuantumState basis_inputs(const std::vector<std::pair<std::string, int>>& bits) {
    RegisterMap r;
    for (const auto& [n, b] : bits) r.add(n, 1);
    QuantumState s = QuantumState::zeros(r);
    for (const auto& [n, b] : bits) {
        if (b) s.apply(gates::X(), {{n, 0}});
    }
    return s;
}

int accepts(const QmaInstance& inst, Adversary adv, int b, int runs, uint64_t seed) {
    Rng rng(seed);
    int acc = 0;
    for (int r = 0; r < runs; r++) {
        Transcript t = run_protocol(inst, ZkConfig{}, adv, Bits::from_string("0"), plus_witness(), rng, b);
        acc += t.verdict.accept;
    }
    return acc;
}

}  // namespace

TEST(zk, commitment_opens) {
    Rng rng(1);
    for (int k = 0; k < 1000; k++) {
        Block m{rng.next(), rng.next()}, s{rng.next(), rng.next()};
        Commitment c = commit(m, s);
        EXPECT_TRUE(verify(c, m, s));
        Block m2 = m;
        m2[k % 2] ^= uint64_t{1} << (k % 64);
        EXPECT_FALSE(verify(c, m2, s));
        Block s2{rng.next(), rng.next()};
        EXPECT_FALSE(commit(m, s2) == c);
    }
}

TEST(zk, mixing_permutation_is_a_bijection) {
    Rng rng(2);
    std::set<Block> seen;
    for (int k = 0; k < (1 << 16); k++) {
        Block s{rng.next(), uint64_t(k)};
        Block c = mix(s);
        EXPECT_EQ(unmix(c), s);
        seen.insert(c);
    }
    EXPECT_EQ(seen.size(), size_t{1} << 16);
    EXPECT_EQ(mix({0, 0}), mix({0, 0}));
}

TEST(zk, bit_string_commitments) {
    Rng rng(3);
    Bits m = rng.bits(300);
    BitsOpening o;
    BitsCommitment c = commit_bits(m, rng, &o);
    EXPECT_EQ(c.blocks.size(), 3u);
    EXPECT_TRUE(verify_bits(c, o));
    BitsOpening bad = o;
    bad.message.flip(299);
    EXPECT_FALSE(verify_bits(c, bad));
    bad = o;
    bad.message.resize(299);
    EXPECT_FALSE(verify_bits(c, bad));
}

TEST(zk, instance_circuits) {
    QmaInstance p = plus_witness_instance();
    for (int u = 0; u < 2; u++) {
        for (int v = 0; v < 2; v++) {
            // Witness padded with X^u Z^v is unpadded by the circuit.
            QuantumState w = plus_witness();
            w.rename("w0", "in3");
            if (v) w.apply(gates::Z(), {{"in3", 0}});
            if (u) w.apply(gates::X(), {{"in3", 0}});
            QuantumState in = tensor(basis_inputs({{"in0", 0}, {"in1", u}, {"in2", v}}), w);
            QuantumState out = reference_evaluate(p.F, in);
            Bits one = Bits::from_string("1");
            EXPECT_NEAR(out.measure({{"out3", 0}}, nullptr, &one).prob, 1.0, 1e-12);
        }
    }
    QmaInstance r = always_reject_instance();
    EXPECT_EQ(r.F.topo.n, 5);
    EXPECT_EQ(r.classical_positions(), (std::set<int>{0, 1, 2}));
}

TEST(zk, honest_prover_is_accepted) {
    QmaInstance inst = plus_witness_instance();
    EXPECT_EQ(accepts(inst, Adversary::kHonest, 0, 20, 5), 20);
    EXPECT_EQ(accepts(inst, Adversary::kHonest, 1, 20, 6), 20);
}

TEST(zk, malformed_provers_fail_the_zero_challenge) {
    QmaInstance inst = plus_witness_instance();
    for (Adversary a : {Adversary::kWrongGate, Adversary::kLabelSwap, Adversary::kOutputFlip, Adversary::kEquivocate}) {
        EXPECT_EQ(accepts(inst, a, 0, 8, 7), 0) << adversary_name(a);
    }
    // Flipping the output dictionary fools the one challenge; equivocation
    // never opens.
    EXPECT_EQ(accepts(inst, Adversary::kOutputFlip, 1, 8, 8), 0);
    EXPECT_EQ(accepts(inst, Adversary::kEquivocate, 1, 8, 9), 0);
}

TEST(zk, one_flipped_bit_leaves_scratch) {
    QmaInstance inst = plus_witness_instance();
    Rng rng(10);
    ZkConfig cfg;
    auto [msg1, st] = prover_round1(inst, cfg, Adversary::kHonest, rng);
    msg1.bundle.offline[2].flip(5);
    Message3 m3 = prover_round3(st, msg1, 0, Bits::from_string("0"), QuantumState(), rng);
    Verdict v = verifier_decide(inst, cfg, Bits::from_string("0"), msg1, m3, rng);
    EXPECT_FALSE(v.accept);
    EXPECT_EQ(v.scratch_weight, 1u);
}

TEST(zk, reject_instance_never_accepts) {
    EXPECT_EQ(accepts(always_reject_instance(), Adversary::kHonest, 1, 20, 11), 0);
    EXPECT_EQ(accepts(always_reject_instance(), Adversary::kHonest, 0, 5, 12), 5);
}

TEST(zk, first_message_ignores_the_input) {
    QmaInstance inst = plus_witness_instance();
    QuantumState zero = basis_inputs({{"w0", 0}});
    Rng r1(13), r2(13);
    Transcript a = run_protocol(inst, ZkConfig{}, Adversary::kHonest, Bits::from_string("0"), plus_witness(), r1, 0);
    Transcript b = run_protocol(inst, ZkConfig{}, Adversary::kHonest, Bits::from_string("1"), zero, r2, 0);
    EXPECT_EQ(transcript_json(a), transcript_json(b));
}

TEST(zk, fixed_classical_input_decodes_to_the_circuit_output) {
    QmaInstance inst = plus_witness_instance();
    ZkConfig cfg;
    for (int z = 0; z < 8; z++) {
        Rng rng(14 + z);
        auto [msg1, st] = prover_round1(inst, cfg, Adversary::kHonest, rng);
        QuantumState before = msg1.bundle.state;
        EncodingBundle b = msg1.bundle;
        for (int k = 0; k < 3; k++) b.classical_online[k] = st.open_labels[k][(z >> k) & 1].message;
        QuantumState got = dec(b, rng).state;
        QuantumState in = tensor(before, basis_inputs({{"in0", z & 1}, {"in1", (z >> 1) & 1}, {"in2", (z >> 2) & 1}}));
        EXPECT_LE(trace_distance(got, reference_evaluate(inst.F, in)), 1e-9);
    }
}

TEST(zk, simulator_aborts_half_the_time) {
    QmaInstance inst = plus_witness_instance();
    Rng rng(20);
    Rng coin(21);
    ChallengeOracle honest = [&coin](const Message1&) { return verifier_challenge(coin); };
    int aborts = 0, runs = 200;
    for (int r = 0; r < runs; r++) {
        SimResult s = zksim0(inst, ZkConfig{}, honest, Bits::from_string("0"), rng);
        if (s.abort) {
            aborts++;
            continue;
        }
        ASSERT_TRUE(s.transcript.has_value());
        EXPECT_EQ(s.transcript->b, s.guess);
        EXPECT_TRUE(s.transcript->verdict.accept) << s.transcript->verdict.reason;
    }
    EXPECT_NEAR(double(aborts) / runs, 0.5, 0.1);
}

TEST(zk, teleport_keys_are_uniform) {
    Rng rng(22);
    for (const QuantumState& w : {plus_witness(), basis_inputs({{"w0", 1}})}) {
        std::vector<uint64_t> c = witness_key_counts(w, 4000, rng);
        EXPECT_GT(chi2_uniform_pvalue(c), 0.01);
    }
}

TEST(zk, transcript_json_has_sections) {
    Rng rng(23);
    Transcript t = run_protocol(plus_witness_instance(), ZkConfig{}, Adversary::kHonest, Bits::from_string("0"),
                                plus_witness(), rng, 1);
    std::string j = transcript_json(t);
    for (const char* key : {"\"msg1\"", "\"commit_r\"", "\"challenge\"", "\"msg3\"", "\"verdict\""})
        EXPECT_NE(j.find(key), std::string::npos) << key;
}
