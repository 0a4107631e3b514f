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

#include "qgc/zk.hpp"

#include <algorithm>
#include <cstdio>
#include <json.hpp>

namespace qgc::zk {

namespace {

constexpr int kFeistelRounds = 8;
constexpr uint64_t kRoundKeys[kFeistelRounds] = {
    0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL, 0xa4093822299f31d0ULL, 0x082efa98ec4e6c89ULL,
    0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL, 0xc0ac29b7c97c50ddULL, 0x3f84d5b5b5470917ULL};

uint64_t round_fn(uint64_t x, int k) { return splitmix64(x ^ kRoundKeys[k]); }

std::string in_name(int i) { return "in" + std::to_string(i); }
std::string prover_e1(int k) { return "prover.e1." + std::to_string(k); }
std::string prover_w(int k) { return "prover.w." + std::to_string(k); }

Block block_of(const Bits& b, size_t idx) {
    Block out{0, 0};
    for (size_t k = 0; k < 128; k++) {
        size_t pos = idx * 128 + k;
        if (pos < b.size() && b[pos]) out[k / 64] |= uint64_t{1} << (k % 64);
    }
    return out;
}

std::string block_hex(const Block& b) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(b[0]),
                  static_cast<unsigned long long>(b[1]));
    return buf;
}

Circuit wrapped_circuit(bool always_reject) {
    std::string text = always_reject ? "qgc-circuit v1\ninputs 5\noutputs 5\nzero 4\ndiscard 0,1,2,3\n"
                                     : "qgc-circuit v1\ninputs 4\noutputs 4\ndiscard 0,1,2\n";
    // Pad first (Z^v then X^u), then the check: H and X.
    text +=
        "gate CZ in=in2,in3 out=out2,a\n"
        "gate CNOT in=in1,a out=out1,b\n"
        "gate H in=b out=c\n"
        "gate X in=c out=out3\n"
        "connect in0 out0\n";
    if (always_reject) text += "connect in4 out4\n";
    return parse_circuit(text);
}

EncodeOptions encode_options(const QmaInstance& inst, const ZkConfig& cfg) {
    EncodeOptions o;
    o.backend = Backend::kCompressed;
    o.cre = cfg.cre;
    o.budget_bits = cfg.budget_bits;
    o.classical_positions = inst.classical_positions();
    return o;
}

uint64_t diff_weight(const Bits& a, const Bits& b) {
    if (a.size() != b.size()) return std::max<uint64_t>(1, std::max(a.size(), b.size()));
    return (a ^ b).popcount();
}

Verdict reject(std::string why) { return {false, std::move(why), 0}; }

Verdict decide_zero(const QmaInstance& inst, const ZkConfig& cfg, const Message1& msg1, const Message3& msg3,
                    const std::vector<int>& positions) {
    if (!verify_bits(msg1.c_r, msg3.r)) return reject("opening of the randomness commitment is invalid");
    if (msg3.all_labels.size() != positions.size()) return reject("wrong number of label openings");
    for (size_t k = 0; k < positions.size(); k++) {
        for (int b = 0; b < 2; b++) {
            if (!verify_bits(msg1.c_labels[k][b], msg3.all_labels[k][b]))
                return reject("opening of a label commitment is invalid");
        }
    }
    const Topology& t = inst.F.topo;
    LabelPlan plan = plan_labels(t, cfg.cre, cfg.budget_bits);
    RandomnessJ J = RandomnessJ::parse(msg3.r.message, t, plan);

    // Re-run the encoder from the opened randomness; whatever differs from
    // the first message stays behind in the scratch.
    RegisterMap regs;
    for (int k = 0; k < inst.m; k++) regs.add(in_name(inst.witness_pos(k)), 1);
    EncodingBundle ref = enc(inst.F, QuantumState::zeros(regs), J, encode_options(inst, cfg));
    const EncodingBundle& got = msg1.bundle;
    uint64_t w = 0;
    if (got.offline.size() != ref.offline.size()) return reject("first message has the wrong gate count");
    for (size_t g = 0; g < ref.offline.size(); g++) w += diff_weight(got.offline[g], ref.offline[g]);
    if (got.dict.size() != ref.dict.size()) w += 1;
    for (const auto& [wire, d] : ref.dict) {
        auto it = got.dict.find(wire);
        if (it == got.dict.end()) {
            w += 1;
            continue;
        }
        for (int k = 0; k < 4; k++) w += diff_weight(it->second[k], d[k]);
    }
    for (size_t k = 0; k < positions.size(); k++) {
        for (int b = 0; b < 2; b++)
            w += diff_weight(msg3.all_labels[k][b].message, classical_input_encoding(t, plan, J, positions[k], b));
    }
    // The compressed quantum part is driven by these; the explicit inverse
    // would undo teleports keyed by them.
    w += diff_weight(got.J.serialize(), msg3.r.message);
    if (print_circuit(got.circuit) != print_circuit(inst.F)) w += 1;
    Verdict v;
    v.scratch_weight = w;
    v.accept = w == 0;
    v.reason = w == 0 ? "inverse check left a zero scratch" : "inverse check left a nonzero scratch";
    return v;
}

Verdict decide_one(const QmaInstance& inst, const Bits& x, Message1& msg1, const Message3& msg3,
                   const std::vector<int>& positions, Rng& rng) {
    if (msg3.z.size() != positions.size() || msg3.chosen.size() != positions.size())
        return reject("wrong number of label openings");
    if (int(x.size()) != inst.n) return reject("instance has the wrong length");
    EncodingBundle b = msg1.bundle;
    for (size_t k = 0; k < positions.size(); k++) {
        int bit = msg3.z[k];
        if (bit != 0 && bit != 1) return reject("opened index is not a bit");
        if (positions[k] < inst.n && bit != int(x[positions[k]])) return reject("opened labels do not match x");
        if (!verify_bits(msg1.c_labels[k][bit], msg3.chosen[k])) return reject("opening of a label commitment is invalid");
        b.classical_online[positions[k]] = msg3.chosen[k].message;
    }
    DecodeResult r = dec(std::move(b), rng);
    std::string out = "out" + std::to_string(inst.accept_output);
    MeasureResult m = r.state.measure({{out, 0}}, &rng);
    Verdict v;
    v.accept = m.outcome[0];
    v.reason = v.accept ? "decoded output measured 1" : "decoded output measured 0";
    return v;
}

nlohmann::json commitment_json(const BitsCommitment& c) {
    nlohmann::json j;
    j["nbits"] = c.nbits;
    for (const auto& b : c.blocks) j["blocks"].push_back(block_hex(b.head) + block_hex(b.body));
    return j;
}

nlohmann::json opening_json(const BitsOpening& o) {
    nlohmann::json j;
    j["nbits"] = o.message.size();
    j["message"] = o.message.empty() ? "" : o.message.to_hex();
    for (const auto& s : o.randomness) j["randomness"].push_back(block_hex(s));
    return j;
}

}  // namespace

// ---------------------------------------------------------------- commitment

Block mix(const Block& s) {
    uint64_t l = s[0], r = s[1];
    for (int k = 0; k < kFeistelRounds; k++) {
        uint64_t nl = r;
        r = l ^ round_fn(r, k);
        l = nl;
    }
    return {l, r};
}

Block unmix(const Block& c) {
    uint64_t l = c[0], r = c[1];
    for (int k = kFeistelRounds - 1; k >= 0; k--) {
        uint64_t pr = l;
        l = r ^ round_fn(l, k);
        r = pr;
    }
    return {l, r};
}

Block expand(const Block& s) {
    uint64_t a = splitmix64(s[0] ^ 0x9e3779b97f4a7c15ULL);
    uint64_t b = splitmix64(s[1] ^ a);
    return {splitmix64(a ^ b), b};
}

Commitment commit(const Block& m, const Block& s) {
    Block e = expand(s);
    return {mix(s), {m[0] ^ e[0], m[1] ^ e[1]}};
}

bool verify(const Commitment& c, const Block& m, const Block& s) { return commit(m, s) == c; }

BitsCommitment commit_bits(const Bits& m, Rng& rng, BitsOpening* opening) {
    BitsCommitment c;
    c.nbits = m.size();
    BitsOpening o;
    o.message = m;
    size_t blocks = (m.size() + 127) / 128;
    for (size_t k = 0; k < blocks; k++) {
        Block s{rng.next(), rng.next()};
        o.randomness.push_back(s);
        c.blocks.push_back(commit(block_of(m, k), s));
    }
    if (opening) *opening = std::move(o);
    return c;
}

bool verify_bits(const BitsCommitment& c, const BitsOpening& o) {
    if (o.message.size() != c.nbits || o.randomness.size() != c.blocks.size()) return false;
    if (c.blocks.size() != (c.nbits + 127) / 128) return false;
    for (size_t k = 0; k < c.blocks.size(); k++) {
        if (!verify(c.blocks[k], block_of(o.message, k), o.randomness[k])) return false;
    }
    return true;
}

// ---------------------------------------------------------------- instances

std::set<int> QmaInstance::classical_positions() const {
    std::set<int> s;
    for (int i = 0; i < n + 2 * m; i++) s.insert(i);
    return s;
}

QmaInstance plus_witness_instance() {
    QmaInstance q;
    q.name = "plus-witness";
    q.F = wrapped_circuit(false);
    q.accept_output = 3;
    return q;
}

QmaInstance always_reject_instance() {
    QmaInstance q;
    q.name = "always-reject";
    q.F = wrapped_circuit(true);
    q.accept_output = 4;
    return q;
}

QmaInstance instance_by_name(const std::string& name) {
    if (name == "plus-witness") return plus_witness_instance();
    if (name == "always-reject") return always_reject_instance();
    throw ParseError("unknown instance: " + name);
}

QuantumState plus_witness() {
    const double h = 1.0 / std::sqrt(2.0);
    return QuantumState::from_amplitudes(RegisterMap{{"w0", 1}}, {h, h});
}

std::string adversary_name(Adversary a) {
    switch (a) {
        case Adversary::kHonest:
            return "honest";
        case Adversary::kWrongGate:
            return "wrong-gate";
        case Adversary::kLabelSwap:
            return "label-swap";
        case Adversary::kOutputFlip:
            return "output-flip";
        case Adversary::kEquivocate:
            return "equivocate";
    }
    return "?";
}

Adversary parse_adversary(const std::string& s) {
    for (Adversary a : {Adversary::kHonest, Adversary::kWrongGate, Adversary::kLabelSwap, Adversary::kOutputFlip,
                        Adversary::kEquivocate}) {
        if (adversary_name(a) == s) return a;
    }
    throw ParseError("unknown adversary: " + s);
}

// ---------------------------------------------------------------- protocol

std::pair<Message1, ProverState> prover_round1(const QmaInstance& inst, const ZkConfig& cfg, Adversary adv, Rng& rng) {
    const Topology& t = inst.F.topo;
    LabelPlan plan = plan_labels(t, cfg.cre, cfg.budget_bits);
    RandomnessJ J = sample_randomness(t, plan, rng);

    Circuit used = inst.F;
    if (adv == Adversary::kWrongGate) used.gates.back() = UniversalGate::named("Z");

    // Witness EPR pairs: the prover keeps e1, the encoder consumes e2.
    QuantumState s;
    for (int k = 0; k < inst.m; k++) {
        RegisterMap r{{prover_e1(k), 1}, {in_name(inst.witness_pos(k)), 1}};
        QuantumState pair = make_state(r, {RegisterInit::epr(prover_e1(k), in_name(inst.witness_pos(k)))});
        s = k == 0 ? pair : tensor(s, pair);
    }
    Message1 msg;
    msg.bundle = enc(used, s, J, encode_options(inst, cfg));
    if (adv == Adversary::kOutputFlip) {
        auto& d = msg.bundle.dict.at(t.output_wire[inst.accept_output]);
        std::swap(d[0], d[1]);
        std::swap(d[2], d[3]);
    }

    ProverState st;
    st.adv = adv;
    std::set<int> cp = inst.classical_positions();
    st.positions.assign(cp.begin(), cp.end());
    msg.c_r = commit_bits(J.serialize(), rng, &st.open_r);
    for (int pos : st.positions) {
        std::array<Bits, 2> lab = {classical_input_encoding(t, plan, J, pos, false),
                                   classical_input_encoding(t, plan, J, pos, true)};
        if (adv == Adversary::kLabelSwap) std::swap(lab[0], lab[1]);
        std::array<BitsCommitment, 2> c;
        std::array<BitsOpening, 2> o;
        for (int b = 0; b < 2; b++) c[b] = commit_bits(lab[b], rng, &o[b]);
        msg.c_labels.push_back(c);
        st.open_labels.push_back(o);
    }
    return {std::move(msg), std::move(st)};
}

int verifier_challenge(Rng& rng) { return int(rng.bit()); }

Message3 prover_round3(ProverState& st, Message1& msg1, int b, const Bits& x, const QuantumState& witness, Rng& rng) {
    Message3 out;
    out.b = b;
    if (b == 0) {
        out.r = st.open_r;
        out.all_labels = st.open_labels;
        if (st.adv == Adversary::kEquivocate && !out.r.message.empty()) out.r.message.flip(0);
        return out;
    }
    // Teleport the witness through the prepared pairs.
    QuantumState& s = msg1.bundle.state;
    int m = 0;
    for (const auto& name : s.regs().names()) {
        if (name.rfind("prover.e1.", 0) == 0) m++;
    }
    if (witness.num_qubits() != m) throw Error("witness width does not match the instance");
    QuantumState w = witness;
    std::vector<std::string> names = w.regs().names();
    for (int k = 0; k < m; k++) w.rename(names[k], prover_w(k));
    s = tensor(s, w);
    std::vector<int> u(m), v(m);
    for (int k = 0; k < m; k++) {
        s.apply(gates::CNOT(), {{prover_w(k), 0}, {prover_e1(k), 0}});
        s.apply(gates::H(), {{prover_w(k), 0}});
        MeasureResult r = s.measure_and_remove({prover_w(k), prover_e1(k)}, &rng);
        v[k] = r.outcome[0];
        u[k] = r.outcome[1];
        auto& side = msg1.bundle.side;
        side.erase(std::remove(side.begin(), side.end(), prover_e1(k)), side.end());
    }
    const int n = int(x.size());
    for (size_t k = 0; k < st.positions.size(); k++) {
        int pos = st.positions[k];
        int bit = pos < n ? int(x[pos]) : pos < n + m ? u[pos - n] : v[pos - n - m];
        out.z.push_back(bit);
        out.chosen.push_back(st.open_labels[k][bit]);
    }
    if (st.adv == Adversary::kEquivocate && !out.chosen.empty()) out.chosen[0].message.flip(0);
    return out;
}

Verdict verifier_decide(const QmaInstance& inst, const ZkConfig& cfg, const Bits& x, Message1& msg1, const Message3& msg3,
                        Rng& rng) {
    std::set<int> cp = inst.classical_positions();
    std::vector<int> positions(cp.begin(), cp.end());
    if (msg1.c_labels.size() != positions.size()) return reject("first message has the wrong number of commitments");
    try {
        if (msg3.b == 0) return decide_zero(inst, cfg, msg1, msg3, positions);
        if (msg3.b == 1) return decide_one(inst, x, msg1, msg3, positions, rng);
        return reject("challenge is not a bit");
    } catch (const Error& e) {
        return reject(std::string("malformed message: ") + e.what());
    }
}

Transcript run_protocol(const QmaInstance& inst, const ZkConfig& cfg, Adversary adv, const Bits& x,
                        const QuantumState& witness, Rng& rng, std::optional<int> force_b) {
    auto [msg1, st] = prover_round1(inst, cfg, adv, rng);
    Transcript t;
    t.b = force_b ? *force_b : verifier_challenge(rng);
    t.msg3 = prover_round3(st, msg1, t.b, x, witness, rng);
    t.verdict = verifier_decide(inst, cfg, x, msg1, t.msg3, rng);
    t.msg1 = std::move(msg1);
    return t;
}

std::string transcript_json(const Transcript& t) {
    nlohmann::json j;
    const EncodingBundle& b = t.msg1.bundle;
    j["msg1"]["digest"] = b.digest();
    j["msg1"]["backend"] = backend_name(b.backend);
    for (const auto& o : b.offline) j["msg1"]["offline"].push_back(o.to_hex());
    for (const auto& [w, d] : b.dict) {
        for (const auto& l : d) j["msg1"]["dict"][std::to_string(w)].push_back(l.to_hex());
    }
    j["msg1"]["quantum_registers"] = b.state.regs().names();
    j["msg1"]["commit_r"] = commitment_json(t.msg1.c_r);
    for (const auto& pair : t.msg1.c_labels) {
        j["msg1"]["commit_labels"].push_back({commitment_json(pair[0]), commitment_json(pair[1])});
    }
    j["challenge"] = t.b;
    if (t.b == 0) {
        j["msg3"]["r"] = opening_json(t.msg3.r);
        for (const auto& pair : t.msg3.all_labels) {
            j["msg3"]["labels"].push_back({opening_json(pair[0]), opening_json(pair[1])});
        }
    } else {
        j["msg3"]["z"] = t.msg3.z;
        for (const auto& o : t.msg3.chosen) j["msg3"]["labels"].push_back(opening_json(o));
    }
    j["verdict"]["accept"] = t.verdict.accept;
    j["verdict"]["reason"] = t.verdict.reason;
    j["verdict"]["scratch_weight"] = t.verdict.scratch_weight;
    return j.dump(1);
}

// ---------------------------------------------------------------- simulator

SimResult zksim0(const QmaInstance& inst, const ZkConfig& cfg, const ChallengeOracle& vstar, const Bits& x, Rng& rng) {
    SimResult res;
    res.guess = int(rng.bit());
    Transcript t;
    if (res.guess == 0) {
        auto [msg1, st] = prover_round1(inst, cfg, Adversary::kHonest, rng);
        t.b = vstar(msg1);
        if (t.b != 0) {
            res.abort = true;
            return res;
        }
        t.msg3 = prover_round3(st, msg1, 0, x, QuantumState(), rng);
        t.verdict = verifier_decide(inst, cfg, x, msg1, t.msg3, rng);
        t.msg1 = std::move(msg1);
        res.transcript = std::move(t);
        return res;
    }

    // Guess 1: encode the all-identity circuit on an accepting output and
    // make both labels of every classical input the same string.
    const Topology& topo = inst.F.topo;
    std::vector<int> u(inst.m), v(inst.m);
    for (int k = 0; k < inst.m; k++) {
        u[k] = int(rng.bit());
        v[k] = int(rng.bit());
    }
    std::string acc = "out" + std::to_string(inst.accept_output);
    QuantumState y = QuantumState::zeros(RegisterMap{{acc, 1}});
    y.apply(gates::X(), {{acc, 0}});
    EncodeOptions opt = encode_options(inst, cfg);
    Message1 msg1;
    msg1.bundle = sim(topo, y, rng, opt);
    msg1.bundle.classical_online.clear();
    LabelPlan plan = plan_labels(topo, cfg.cre, cfg.budget_bits);
    BitsOpening open_r;
    msg1.c_r = commit_bits(Bits(sample_randomness(topo, plan, rng).serialize().size()), rng, &open_r);
    std::set<int> cp = inst.classical_positions();
    std::vector<int> positions(cp.begin(), cp.end());
    std::vector<std::array<BitsOpening, 2>> open_labels;
    for (int pos : positions) {
        Bits lab = classical_input_encoding(topo, msg1.bundle.plan, msg1.bundle.J, pos, false);
        std::array<BitsCommitment, 2> c;
        std::array<BitsOpening, 2> o;
        for (int b = 0; b < 2; b++) c[b] = commit_bits(lab, rng, &o[b]);
        msg1.c_labels.push_back(c);
        open_labels.push_back(o);
    }
    t.b = vstar(msg1);
    if (t.b != 1) {
        res.abort = true;
        return res;
    }
    t.msg3.b = 1;
    const int n = inst.n;
    for (size_t k = 0; k < positions.size(); k++) {
        int pos = positions[k];
        int bit = pos < n ? int(x[pos]) : pos < n + inst.m ? u[pos - n] : v[pos - n - inst.m];
        t.msg3.z.push_back(bit);
        t.msg3.chosen.push_back(open_labels[k][bit]);
    }
    t.verdict = verifier_decide(inst, cfg, x, msg1, t.msg3, rng);
    t.msg1 = std::move(msg1);
    res.transcript = std::move(t);
    return res;
}

std::vector<uint64_t> witness_key_counts(const QuantumState& witness, int runs, Rng& rng) {
    if (witness.num_qubits() != 1) throw Error("witness key counts take a one-qubit witness");
    std::vector<uint64_t> counts(4, 0);
    QuantumState w = witness;
    w.rename(w.regs().names()[0], "w");
    QuantumState pair = make_state(RegisterMap{{"e1", 1}, {"e2", 1}}, {RegisterInit::epr("e1", "e2")});
    QuantumState s0 = tensor(w, pair);
    s0.apply(gates::CNOT(), {{"w", 0}, {"e1", 0}});
    s0.apply(gates::H(), {{"w", 0}});
    for (int r = 0; r < runs; r++) {
        QuantumState s = s0;
        MeasureResult m = s.measure({{"w", 0}, {"e1", 0}}, &rng);
        int v = m.outcome[0], u = m.outcome[1];
        counts[2 * u + v]++;
    }
    return counts;
}

}  // namespace qgc::zk
