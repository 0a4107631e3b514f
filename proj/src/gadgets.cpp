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

#include "qgc/gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qgc {

namespace {

QubitAddr q(const std::string& reg, int off = 0) { return {reg, off}; }

GateOp single(const char* name, const QubitAddr& a) {
    std::string n(name);
    GateMatrix m = n == "X" ? gates::X() : n == "Z" ? gates::Z() : n == "H" ? gates::H() : gates::P();
    return GateOp::unitary(n, m, {a});
}

// Circuit-order sequence of (gate, exponent) pairs to a single-qubit Clifford index.
int clifford_index(std::initializer_list<std::pair<char, int>> seq) {
    GateMatrix m = gates::I();
    for (auto [g, e] : seq) {
        if (!(e & 1)) continue;
        GateMatrix f = g == 'X' ? gates::X() : g == 'Z' ? gates::Z() : gates::P();
        m = f * m;
    }
    int k = clifford1::from_matrix(m);
    if (k < 0) throw Error("internal: sequence is not a single-qubit Clifford");
    return k;
}

Tableau pair_tableau(bool cz, bool x_first) {
    Tableau t(2);
    if (cz) t.cz(0, 1);
    if (x_first) {
        // X on qubit 0 after the CZ: two S gates conjugated by H.
        t.h(0);
        t.s(0);
        t.s(0);
        t.h(0);
    }
    return t;
}

int slot_qubit_count(int kappa) { return RandomizerElement::num_singles(kappa); }

QubitAddr single_slot_qubit(int kappa, int k) {
    if (k == 0) return q("u");
    if (k <= kappa) return q("z", k - 1);
    if (k <= 2 * kappa) return q("x", k - 1 - kappa);
    if (k == 2 * kappa + 1) return q("v");
    int i = k - 2 * kappa - 2;
    return b_qubit(kappa, i, i);
}

// Fan-outs copying u into row 0 and z_j into row j of b.
GateList copy_fanouts(int kappa, bool ascending) {
    GateList gl;
    for (int step = 0; step <= kappa; step++) {
        int row = ascending ? step : kappa - step;
        std::vector<QubitAddr> t;
        for (int k = 0; k <= kappa; k++) t.push_back(b_qubit(kappa, row, k));
        gl.push_back(GateOp::fanout(row == 0 ? q("u") : q("z", row - 1), t));
    }
    return gl;
}

std::vector<QubitAddr> positions(const std::string& reg, const Bits& mask) {
    std::vector<QubitAddr> out;
    for (size_t j = 0; j < mask.size(); j++) {
        if (mask.get(j)) out.push_back(q(reg, int(j)));
    }
    return out;
}

void xor_pattern(GateList& gl, const std::string& reg, const Bits& pattern) {
    for (const auto& a : positions(reg, pattern)) gl.push_back(single("X", a));
}

}  // namespace

// ---------------------------------------------------------------- gate lists

GateOp GateOp::unitary(std::string name, GateMatrix m, std::vector<QubitAddr> qs) {
    GateOp g;
    g.kind = Kind::kUnitary;
    g.name = std::move(name);
    g.m = std::move(m);
    g.qubits = std::move(qs);
    return g;
}

GateOp GateOp::fanout(QubitAddr control, std::vector<QubitAddr> targets) {
    GateOp g;
    g.kind = Kind::kFanOut;
    g.name = "FANOUT";
    g.qubits.push_back(std::move(control));
    for (auto& t : targets) g.qubits.push_back(std::move(t));
    return g;
}

GateOp GateOp::parity(QubitAddr target, std::vector<QubitAddr> controls) {
    GateOp g;
    g.kind = Kind::kParity;
    g.name = "PARITY";
    g.qubits.push_back(std::move(target));
    for (auto& c : controls) g.qubits.push_back(std::move(c));
    return g;
}

void apply_gate_list(QuantumState& s, const GateList& gl, const RegisterBinding& bind) {
    auto map = [&](const QubitAddr& a) {
        auto it = bind.find(a.reg);
        return it == bind.end() ? a : QubitAddr{it->second, a.offset};
    };
    for (const auto& g : gl) {
        std::vector<QubitAddr> qs;
        for (const auto& a : g.qubits) qs.push_back(map(a));
        switch (g.kind) {
            case GateOp::Kind::kUnitary:
                s.apply(g.m, qs);
                break;
            case GateOp::Kind::kFanOut:
                if (qs.size() > 1) s.fanout(qs[0], {qs.begin() + 1, qs.end()});
                break;
            case GateOp::Kind::kParity:
                if (qs.size() > 1) s.parity(qs[0], {qs.begin() + 1, qs.end()});
                break;
        }
    }
}

std::string print_gate_list(const GateList& gl) {
    std::ostringstream os;
    auto addr = [](const QubitAddr& a) { return a.reg + "[" + std::to_string(a.offset) + "]"; };
    for (const auto& g : gl) {
        if (g.kind == GateOp::Kind::kUnitary) {
            os << "gate " << g.name;
            for (const auto& a : g.qubits) os << " " << addr(a);
        } else {
            os << (g.kind == GateOp::Kind::kFanOut ? "fanout " : "parity ") << addr(g.qubits[0])
               << (g.kind == GateOp::Kind::kFanOut ? " ->" : " <-");
            for (size_t k = 1; k < g.qubits.size(); k++) os << " " << addr(g.qubits[k]);
        }
        os << "\n";
    }
    return os.str();
}

int gate_list_depth(const GateList& gl) {
    std::map<std::pair<std::string, int>, int> layer;
    int depth = 0;
    for (const auto& g : gl) {
        if (g.kind != GateOp::Kind::kUnitary && g.qubits.size() < 2) continue;
        int l = 0;
        for (const auto& a : g.qubits) l = std::max(l, layer[{a.reg, a.offset}]);
        for (const auto& a : g.qubits) layer[{a.reg, a.offset}] = l + 1;
        depth = std::max(depth, l + 1);
    }
    return depth;
}

QubitAddr b_qubit(int kappa, int i, int j) { return {"b", i * (kappa + 1) + j}; }

RegisterMap gadget_registers(int kappa, bool with_b, bool with_up) {
    RegisterMap r;
    r.add("u", 1);
    r.add("z", kappa);
    r.add("x", kappa);
    r.add("v", 1);
    if (with_b) r.add("b", (kappa + 1) * (kappa + 1));
    if (with_up) r.add("up", 1);
    return r;
}

// ---------------------------------------------------------------- teleport params

void TeleportParams::validate() const {
    if (lz0.size() < 1) throw Error("teleport labels must have length >= 1");
    if (lz1.size() != lz0.size() || lx0.size() != lz0.size() || lx1.size() != lz0.size()) {
        throw Error("teleport label length mismatch");
    }
}

TeleportParams TeleportParams::sample(int kappa, Rng& rng) {
    TeleportParams p;
    p.lz0 = rng.bits(kappa);
    p.lz1 = rng.bits(kappa);
    p.lx0 = rng.bits(kappa);
    p.lx1 = rng.bits(kappa);
    p.sz = rng.bit();
    p.sx = rng.bit();
    p.tz = rng.bit();
    p.tx = rng.bit();
    return p;
}

TeleportParams TeleportParams::from_labels(Bits lz0, Bits lz1, Bits lx0, Bits lx1, int sz, int sx, int tz, int tx) {
    TeleportParams p{std::move(lz0), std::move(lz1), std::move(lx0), std::move(lx1), sz & 1, sx & 1, tz & 1, tx & 1};
    p.validate();
    return p;
}

GateList tp_circuit(const TeleportParams& p) {
    p.validate();
    GateList gl;
    gl.push_back(GateOp::unitary("CNOT", gates::CNOT(), {q("u"), q("v")}));
    gl.push_back(single("H", q("u")));
    xor_pattern(gl, "z", p.lz0);
    xor_pattern(gl, "x", p.lx0);
    gl.push_back(GateOp::fanout(q("u"), positions("z", p.lz0 ^ p.lz1)));
    gl.push_back(GateOp::fanout(q("v"), positions("x", p.lx0 ^ p.lx1)));
    if (p.sx) gl.push_back(single("X", q("u")));
    if (p.sz) gl.push_back(single("Z", q("u")));
    if (p.tx) gl.push_back(single("X", q("v")));
    if (p.tz) gl.push_back(single("Z", q("v")));
    return gl;
}

GateList classical_tp_circuit(const TeleportParams& p) {
    p.validate();
    GateList gl;
    gl.push_back(GateOp::unitary("CNOT", gates::CNOT(), {q("u"), q("v")}));
    xor_pattern(gl, "z", p.lz0);
    xor_pattern(gl, "x", p.lx0);
    gl.push_back(GateOp::fanout(q("v"), positions("x", p.lx0 ^ p.lx1)));
    if (p.sx) gl.push_back(single("X", q("u")));
    if (p.tx) gl.push_back(single("X", q("v")));
    return gl;
}

ClassicalTpOutput classical_tp_eval(const TeleportParams& p, bool y, bool r) {
    p.validate();
    bool e = r ^ y;
    ClassicalTpOutput o;
    o.u = y ^ bool(p.sx);
    o.z = p.lz0;
    o.x = p.x_label(e);
    o.v = e ^ bool(p.tx);
    o.up = e ^ y;
    return o;
}

// ---------------------------------------------------------------- decomposition

GateList c1(const Bits& r) {
    const int kappa = int(r.size());
    if (kappa < 1) throw Error("c1: empty fan-out pattern");
    GateList gl;
    for (int j = 0; j < kappa; j++) gl.push_back(single("H", q("z", j)));
    gl.push_back(GateOp::parity(q("u"), positions("z", r)));
    for (auto& g : copy_fanouts(kappa, false)) gl.push_back(std::move(g));
    return gl;
}

GateList c3(int kappa) {
    GateList gl = copy_fanouts(kappa, true);
    gl.push_back(single("H", q("u")));
    for (int j = 0; j < kappa; j++) gl.push_back(single("H", q("z", j)));
    return gl;
}

std::vector<std::pair<QubitAddr, QubitAddr>> gamma(bool p, const Bits& r) {
    const int kappa = int(r.size());
    std::vector<std::pair<QubitAddr, QubitAddr>> out;
    if (!p) return out;
    for (int j = 1; j <= kappa; j++) {
        if (r.get(j - 1)) out.push_back({b_qubit(kappa, 0, j), b_qubit(kappa, j, 0)});
    }
    for (int i = 1; i <= kappa; i++) {
        for (int j = i + 1; j <= kappa; j++) {
            if (r.get(i - 1) && r.get(j - 1)) out.push_back({b_qubit(kappa, i, j), b_qubit(kappa, j, i)});
        }
    }
    return out;
}

RandomizerElement c2(const PXElement& R, const Bits& r, int sz, int sx) {
    const int kappa = int(r.size());
    if (kappa < 1) throw Error("c2: empty fan-out pattern");
    const int x = R.x_bit(), z = R.z_bit(), p = R.p_bit();
    const int flip = x ^ (sz & 1);
    RandomizerElement e = RandomizerElement::identity(kappa);
    e.singles[RandomizerElement::slot_u()] =
        uint8_t(clifford_index({{'P', p}, {'Z', z}, {'X', x}, {'Z', sx}, {'X', sz}}));
    for (int j = 1; j <= kappa; j++) {
        int rj = r.get(j - 1);
        e.singles[RandomizerElement::slot_z(kappa, j - 1)] = uint8_t(clifford_index({{'P', p & rj}, {'Z', z & rj}}));
    }
    e.singles[RandomizerElement::slot_bdiag(kappa, 0)] = uint8_t(clifford_index({{'X', flip}}));
    for (int j = 1; j <= kappa; j++) {
        e.pairs[RandomizerElement::pair_index(kappa, 0, j)] = pair_tableau(p & r.get(j - 1), flip);
    }
    for (int i = 1; i <= kappa; i++) {
        for (int j = i + 1; j <= kappa; j++) {
            e.pairs[RandomizerElement::pair_index(kappa, i, j)] = pair_tableau(p & r.get(i - 1) & r.get(j - 1), false);
        }
    }
    return e;
}

GateList lambda1(const TeleportParams& p) {
    p.validate();
    GateList gl;
    gl.push_back(GateOp::unitary("CNOT", gates::CNOT(), {q("u"), q("v")}));
    xor_pattern(gl, "z", p.lz0);
    xor_pattern(gl, "x", p.lx0);
    gl.push_back(GateOp::fanout(q("v"), positions("x", p.lx0 ^ p.lx1)));
    for (auto& g : c1(p.lz0 ^ p.lz1)) gl.push_back(std::move(g));
    return gl;
}

RandomizerElement lambda2(const PXElement& R, const TeleportParams& p) {
    p.validate();
    const int kappa = p.kappa();
    const int a = R.x_bit();
    RandomizerElement e = c2(R, p.lz0 ^ p.lz1, p.sz, p.sx);
    const Bits rx = p.lx0 ^ p.lx1;
    for (int j = 0; j < kappa; j++) {
        e.singles[RandomizerElement::slot_x(kappa, j)] = uint8_t(clifford_index({{'X', a & rx.get(j)}}));
    }
    e.singles[RandomizerElement::slot_v(kappa)] = uint8_t(clifford_index({{'X', a}, {'X', p.tx}, {'Z', p.tz}}));
    return e;
}

GateList lambda3(int kappa) { return c3(kappa); }

GateList randomizer_circuit(const RandomizerElement& e) {
    const int kappa = e.kappa;
    const int id = clifford1::identity();
    GateList gl;
    for (int k = 0; k < slot_qubit_count(kappa); k++) {
        if (e.singles[k] == id) continue;
        gl.push_back(GateOp::unitary("C1:" + std::to_string(e.singles[k]), clifford1::matrix(e.singles[k]),
                                     {single_slot_qubit(kappa, k)}));
    }
    const Tableau ident(2);
    for (int i = 0; i <= kappa; i++) {
        for (int j = i + 1; j <= kappa; j++) {
            const Tableau& t = e.pairs[RandomizerElement::pair_index(kappa, i, j)];
            if (t == ident) continue;
            gl.push_back(GateOp::unitary("C2", t.matrix(), {b_qubit(kappa, i, j), b_qubit(kappa, j, i)}));
        }
    }
    return gl;
}

RandomizerElement corr_gadget(const RandomizerElement& A, const PXElement& R, const TeleportParams& p) {
    if (A.kappa != p.kappa()) throw Error("corr_gadget: randomizer width does not match the labels");
    return randomizer_compose(lambda2(R, p), randomizer_inverse(A));
}

// ---------------------------------------------------------------- encodings

size_t gadget_encoding_length(int kappa) { return 32 + RandomizerElement::encoded_bits(kappa); }

Bits encode_gadget(const RandomizerElement& e) {
    Bits b;
    b.append_uint(RandomizerElement::encoded_bits(e.kappa), 32);
    b.append(randomizer_encode(e));
    return b;
}

RandomizerElement parse_corr(const Bits& bits, int kappa) {
    if (bits.size() != gadget_encoding_length(kappa)) throw ParseError("correction gadget has the wrong length");
    if (bits.read_uint(0, 32) != RandomizerElement::encoded_bits(kappa)) {
        throw ParseError("correction gadget length prefix does not match kappa");
    }
    return randomizer_decode(bits.slice(32, bits.size() - 32), kappa);
}

RandomizerElement parse_corr_lenient(const Bits& bits, int kappa, int* invalid_slots) {
    if (bits.size() != gadget_encoding_length(kappa)) throw ParseError("correction gadget has the wrong length");
    int bad = 0;
    RandomizerElement e = randomizer_decode_lenient(bits.slice(32, bits.size() - 32), kappa, &bad);
    if (bits.read_uint(0, 32) != RandomizerElement::encoded_bits(kappa)) bad++;
    if (invalid_slots) *invalid_slots = bad;
    return e;
}

std::vector<PXElement> correction_residues(const UniversalGate& g, uint64_t zx) {
    const int p = g.arity;
    Pauli w;
    for (int j = 0; j < p; j++) {
        w.z |= uint32_t((zx >> (2 * p - 1 - 2 * j)) & 1) << j;
        w.x |= uint32_t((zx >> (2 * p - 2 - 2 * j)) & 1) << j;
    }
    PushResult res = pauli_pushthrough(g, w);
    std::vector<PXElement> out;
    for (const auto& r : res.r) out.push_back(r.inverse());
    return out;
}

FnSignature correction_fn(const UniversalGate& g, const std::vector<RandomizerElement>& A,
                          const std::vector<TeleportParams>& tp) {
    const int p = g.arity;
    if (int(A.size()) != p || int(tp.size()) != p) throw Error("correction_fn: parameter count does not match arity");
    uint64_t m_out = 0;
    std::vector<RandomizerElement> inv;
    for (int j = 0; j < p; j++) {
        if (A[j].kappa != tp[j].kappa()) throw Error("correction_fn: randomizer width does not match the labels");
        m_out += gadget_encoding_length(tp[j].kappa());
        inv.push_back(randomizer_inverse(A[j]));
    }
    std::vector<Bits> table;
    for (uint64_t w = 0; w < (uint64_t{1} << (2 * p)); w++) {
        std::vector<PXElement> R = correction_residues(g, w);
        Bits row;
        for (int j = 0; j < p; j++) row.append(encode_gadget(randomizer_compose(lambda2(R[j], tp[j]), inv[j])));
        table.push_back(std::move(row));
    }
    return FnSignature::from_table(2 * p, m_out, std::move(table));
}

TeleportOutcome compressed_teleport(QuantumState& s, const std::string& data_reg, const TeleportParams& p, Rng* rng,
                                    std::optional<std::pair<int, int>> forced) {
    p.validate();
    if (s.regs().width(data_reg) != 1) throw Error("compressed_teleport: data register must be one qubit");
    TeleportOutcome o;
    if (forced) {
        o.d = forced->first & 1;
        o.e = forced->second & 1;
    } else {
        if (!rng) throw Error("compressed_teleport: no randomness source");
        o.d = rng->bit();
        o.e = rng->bit();
    }
    // Every (d, e) branch of the gadget has weight exactly 1/4.
    o.prob = 0.25;
    if (o.d) s.apply(gates::Z(), {q(data_reg)});
    if (o.e) s.apply(gates::X(), {q(data_reg)});
    o.z_label = p.z_label(o.d);
    o.x_label = p.x_label(o.e);
    return o;
}

// ---------------------------------------------------------------- sparse checks

SparseState::SparseState(RegisterMap regs) : regs_(std::move(regs)) {
    if (regs_.total() > 62) throw Error("sparse state supports at most 62 qubits");
}

SparseState SparseState::basis(RegisterMap regs, uint64_t index) {
    SparseState s(std::move(regs));
    s.amps_[index] = 1.0;
    return s;
}

uint64_t SparseState::mask(const QubitAddr& a) const { return uint64_t{1} << (regs_.total() - 1 - regs_.flat(a)); }

cd SparseState::amplitude(uint64_t index) const {
    auto it = amps_.find(index);
    return it == amps_.end() ? cd(0.0) : it->second;
}

void SparseState::apply(const GateOp& g) {
    std::vector<uint64_t> masks;
    for (const auto& a : g.qubits) masks.push_back(mask(a));
    if (g.kind != GateOp::Kind::kUnitary) {
        if (masks.size() < 2) return;
        std::unordered_map<uint64_t, cd> next;
        for (const auto& [idx, amp] : amps_) {
            uint64_t out = idx;
            if (g.kind == GateOp::Kind::kFanOut) {
                if (idx & masks[0]) {
                    for (size_t k = 1; k < masks.size(); k++) out ^= masks[k];
                }
            } else {
                bool par = false;
                for (size_t k = 1; k < masks.size(); k++) par ^= bool(idx & masks[k]);
                if (par) out ^= masks[0];
            }
            next[out] += amp;
        }
        amps_ = std::move(next);
        return;
    }
    const int k = g.m.arity;
    if (int(masks.size()) != k) throw Error("sparse apply: arity mismatch");
    uint64_t all = 0;
    for (auto m : masks) all |= m;
    std::unordered_map<uint64_t, cd> next;
    for (const auto& [idx, amp] : amps_) {
        size_t col = 0;
        for (int t = 0; t < k; t++) col = (col << 1) | ((idx & masks[t]) ? 1 : 0);
        uint64_t base = idx & ~all;
        for (size_t row = 0; row < g.m.dim(); row++) {
            cd c = g.m.at(row, col);
            if (c == cd(0.0)) continue;
            uint64_t out = base;
            for (int t = 0; t < k; t++) {
                if ((row >> (k - 1 - t)) & 1) out |= masks[t];
            }
            next[out] += c * amp;
        }
    }
    for (auto it = next.begin(); it != next.end();) {
        it = std::abs(it->second) < 1e-15 ? next.erase(it) : std::next(it);
    }
    amps_ = std::move(next);
}

double gate_list_distance(const RegisterMap& regs, const GateList& lhs, const GateList& rhs,
                          const std::vector<std::string>& ancilla) {
    std::vector<uint64_t> free_masks;
    SparseState probe(regs);
    for (const auto& [name, width] : regs.entries()) {
        if (std::find(ancilla.begin(), ancilla.end(), name) != ancilla.end()) continue;
        for (int o = 0; o < width; o++) free_masks.push_back(probe.mask({name, o}));
    }
    if (free_masks.size() > 20) throw Error("gate_list_distance: too many free qubits");
    // Two passes: the phase from the overlap, then the aligned difference.
    // Expanding |a|^2 + |b|^2 - 2|<a,b>| instead loses half the digits.
    std::vector<std::pair<SparseState, SparseState>> cols;
    cd inner = 0.0;
    for (uint64_t v = 0; v < (uint64_t{1} << free_masks.size()); v++) {
        uint64_t idx = 0;
        for (size_t k = 0; k < free_masks.size(); k++) {
            if ((v >> k) & 1) idx |= free_masks[k];
        }
        SparseState a = SparseState::basis(regs, idx), b = SparseState::basis(regs, idx);
        a.apply(lhs);
        b.apply(rhs);
        for (const auto& [i, amp] : a.amps()) inner += std::conj(b.amplitude(i)) * amp;
        cols.emplace_back(std::move(a), std::move(b));
    }
    const cd phase = std::abs(inner) > 0 ? inner / std::abs(inner) : cd(1.0);
    double sum = 0.0;
    for (const auto& [a, b] : cols) {
        for (const auto& [i, amp] : a.amps()) sum += std::norm(amp - phase * b.amplitude(i));
        for (const auto& [i, amp] : b.amps()) {
            if (a.amps().find(i) == a.amps().end()) sum += std::norm(amp);
        }
    }
    return std::sqrt(sum);
}

double lambda_identity_distance(const PXElement& R, const TeleportParams& p) {
    const int kappa = p.kappa();
    GateList lhs{GateOp::unitary("R", R.matrix(), {q("u")})};
    for (auto& g : tp_circuit(p)) lhs.push_back(std::move(g));
    GateList rhs = lambda1(p);
    for (auto& g : randomizer_circuit(lambda2(R, p))) rhs.push_back(std::move(g));
    for (auto& g : lambda3(kappa)) rhs.push_back(std::move(g));
    return gate_list_distance(gadget_registers(kappa, true, false), lhs, rhs, {"b"});
}

double c_identity_distance(const PXElement& R, const Bits& r, int sz, int sx) {
    const int kappa = int(r.size());
    RegisterMap regs{{"u", 1}, {"z", kappa}, {"b", (kappa + 1) * (kappa + 1)}};
    GateList lhs{GateOp::unitary("R", R.matrix(), {q("u")}), single("H", q("u")),
                 GateOp::fanout(q("u"), positions("z", r))};
    if (sx & 1) lhs.push_back(single("X", q("u")));
    if (sz & 1) lhs.push_back(single("Z", q("u")));
    GateList rhs = c1(r);
    for (auto& g : randomizer_circuit(c2(R, r, sz, sx))) rhs.push_back(std::move(g));
    for (auto& g : c3(kappa)) rhs.push_back(std::move(g));
    return gate_list_distance(regs, lhs, rhs, {"b"});
}

bool gamma_phase_law(const Bits& r) {
    const int kappa = int(r.size());
    RegisterMap regs{{"u", 1}, {"z", kappa}, {"b", (kappa + 1) * (kappa + 1)}};
    GateList copy = copy_fanouts(kappa, false);
    GateOp par = GateOp::parity(q("u"), positions("z", r));

    GateList lhs{single("P", q("u")), par};
    lhs.insert(lhs.end(), copy.begin(), copy.end());

    GateList rhs{par};
    rhs.insert(rhs.end(), copy.begin(), copy.end());
    rhs.push_back(single("P", q("u")));
    for (const auto& a : positions("z", r)) rhs.push_back(single("P", a));
    for (const auto& [a, b] : gamma(true, r)) rhs.push_back(GateOp::unitary("CZ", gates::CZ(), {a, b}));

    SparseState probe(regs);
    const int nfree = 1 + kappa;
    for (uint64_t v = 0; v < (uint64_t{1} << nfree); v++) {
        uint64_t idx = 0;
        if (v & 1) idx |= probe.mask(q("u"));
        for (int j = 0; j < kappa; j++) {
            if ((v >> (j + 1)) & 1) idx |= probe.mask(q("z", j));
        }
        SparseState a = SparseState::basis(regs, idx), b = SparseState::basis(regs, idx);
        a.apply(lhs);
        b.apply(rhs);
        if (a.amps().size() != 1 || b.amps().size() != 1) return false;
        auto [ia, xa] = *a.amps().begin();
        if (b.amps().begin()->first != ia) return false;
        if (std::abs(xa - b.amps().begin()->second) > 1e-12) return false;
    }
    return true;
}

}  // namespace qgc
