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

#include "qgc/qgc.hpp"

#include <algorithm>
#include <climits>
#include <optional>
#include <sstream>

namespace qgc {

namespace {

std::string in_name(int i) { return "in" + std::to_string(i); }
std::string out_name(int j) { return "out" + std::to_string(j); }
std::string wreg(const char* kind, int w) { return std::string(kind) + "." + std::to_string(w); }

bool is_terminal_name(const std::string& name, const char* prefix, int n) {
    size_t k = std::char_traits<char>::length(prefix);
    if (name.size() <= k || name.compare(0, k, prefix) != 0) return false;
    for (size_t i = k; i < name.size(); i++) {
        if (name[i] < '0' || name[i] > '9') return false;
    }
    if (name.size() > k + 1 && name[k] == '0') return false;
    return std::stoll(name.substr(k)) < n;
}

// Live qubits of one wire's registers: EPR pair, z, x and the copy block.
int wire_qubits(int kappa) { return 2 + 2 * kappa + (kappa + 1) * (kappa + 1); }

uint64_t randomizer_bits_saturating(uint64_t k) {
    uint64_t singles = sat_mul(5, sat_add(sat_mul(3, k), 3));
    uint64_t pairs = sat_mul(10, sat_mul(k, sat_add(k, 1)));
    return sat_add(singles, pairs);
}

RegisterBinding wire_binding(int carrier, int w) {
    return {{"u", wreg("e2", carrier)},
            {"z", wreg("z", w)},
            {"x", wreg("x", w)},
            {"v", wreg("e1", w)},
            {"b", wreg("b", w)}};
}

// Labels, parameters and randomizers derived from J, computed once.
struct Context {
    const Topology& t;
    const LabelPlan& plan;
    const RandomnessJ& J;
    std::vector<std::vector<Bits>> labels;  // per gate CRE labels

    Context(const Topology& topo, const LabelPlan& pl, const RandomnessJ& j) : t(topo), plan(pl), J(j) {
        labels.resize(t.num_gates());
        for (int g = 0; g < t.num_gates(); g++) {
            const auto& s = plan.sig[g];
            labels[g] = cre_labels(s.n_in, s.m_out, J.r[g], plan.cre);
        }
    }

    TeleportParams params(int w) const {
        const auto& s = J.s[w];
        const auto& tt = J.t[w];
        if (t.is_output_wire(w)) {
            int oz = J.o[w][0], ox = J.o[w][1];
            return TeleportParams::from_labels(Bits::from_uint(oz, 1), Bits::from_uint(oz ^ 1, 1), Bits::from_uint(ox, 1),
                                               Bits::from_uint(ox ^ 1, 1), s[0], s[1], tt[0], tt[1]);
        }
        const WireEnd& dst = t.wire_dst[w];
        const auto& lab = labels[dst.index];
        int j = dst.slot;
        // Input 2i + b of the CRE label list sits at index 2 * input + b.
        return TeleportParams::from_labels(lab[2 * (2 * j)], lab[2 * (2 * j) + 1], lab[2 * (2 * j + 1)],
                                           lab[2 * (2 * j + 1) + 1], s[0], s[1], tt[0], tt[1]);
    }
};

void check_randomness(const Topology& t, const LabelPlan& plan, const RandomnessJ& J) {
    const int W = t.num_wires();
    if (int(J.r.size()) != t.num_gates() || int(J.A.size()) != W || int(J.s.size()) != W || int(J.t.size()) != W ||
        int(J.o.size()) != W || int(J.epr.size()) != t.n)
        throw Error("randomness does not match the circuit topology");
    for (int g = 0; g < t.num_gates(); g++) {
        if (J.r[g].size() != plan.sig[g].randomness_bits) throw Error("randomness does not match the label plan");
    }
    for (int w = 0; w < W; w++) {
        if (!t.is_input_wire(w) && J.A[w].kappa != plan.kappa_of(w))
            throw Error("randomizer width does not match the label plan");
    }
}

void materialize_wire(QuantumState& s, int w, int kappa) {
    s.add_epr(wreg("e1", w), wreg("e2", w));
    s.add_zeros(wreg("z", w), kappa);
    s.add_zeros(wreg("x", w), kappa);
    s.add_zeros(wreg("b", w), (kappa + 1) * (kappa + 1));
}

void run_input_tp(QuantumState& s, const Context& ctx, int i) {
    int w = ctx.t.input_wire[i];
    materialize_wire(s, w, ctx.plan.kappa_of(w));
    RegisterBinding bind = {{"u", in_name(i)}, {"z", wreg("z", w)}, {"x", wreg("x", w)}, {"v", wreg("e1", w)}};
    apply_gate_list(s, tp_circuit(ctx.params(w)), bind);
}

void run_gate_enc(QuantumState& s, const Context& ctx, const UniversalGate& gate, int g) {
    const auto& node = ctx.t.gates[g];
    for (int w : node.outwires) materialize_wire(s, w, ctx.plan.kappa_of(w));
    std::vector<QubitAddr> carriers;
    for (int v : node.inwires) carriers.push_back({wreg("e2", v), 0});
    s.apply(gate.matrix(), carriers);
    for (int j = 0; j < node.arity(); j++) {
        int w = node.outwires[j];
        RegisterBinding bind = wire_binding(node.inwires[j], w);
        apply_gate_list(s, lambda1(ctx.params(w)), bind);
        apply_gate_list(s, randomizer_circuit(ctx.J.A[w]), bind);
    }
}

FnSignature gate_correction_fn(const Context& ctx, const UniversalGate& gate, int g) {
    std::vector<RandomizerElement> A;
    std::vector<TeleportParams> tp;
    for (int w : ctx.t.gates[g].outwires) {
        A.push_back(ctx.J.A[w]);
        tp.push_back(ctx.params(w));
    }
    return correction_fn(gate, A, tp);
}

int find_key(const Bits& got, const Bits& l0, const Bits& l1, const char* what, int w) {
    if (got == l0) return 0;
    if (got == l1) return 1;
    throw IntegrityError(std::string(what) + " label on wire " + std::to_string(w) + " matches neither key");
}

QuantumState finish_outputs(QuantumState s, const EncodingBundle& b, const std::map<int, std::pair<Bits, Bits>>& lab) {
    const Topology& t = b.topo;
    std::vector<std::string> order = b.side, keep = b.side;
    for (int j = 0; j < t.n; j++) {
        int w = t.output_wire[j];
        auto it = lab.find(w);
        auto dt = b.dict.find(w);
        if (it == lab.end() || dt == b.dict.end()) throw IntegrityError("no labels for output wire " + std::to_string(w));
        const auto& d4 = dt->second;
        int d = find_key(it->second.first, d4[0], d4[1], "output z", w);
        int e = find_key(it->second.second, d4[2], d4[3], "output x", w);
        std::string reg = wreg("e2", w);
        // Data is X^e Z^d applied to the output; undo in reverse.
        if (e) s.apply(gates::X(), {{reg, 0}});
        if (d) s.apply(gates::Z(), {{reg, 0}});
        s.rename(reg, out_name(j));
        order.push_back(out_name(j));
        if (!t.is_discard(j)) keep.push_back(out_name(j));
    }
    s = s.reordered(order);
    if (keep.size() == order.size()) return s;
    return partial_trace(s, keep);
}

std::optional<std::pair<int, int>> chosen(const DecodeOptions& opt, int w) {
    if (!opt.choose) return std::nullopt;
    return opt.choose(w);
}

DecodeResult dec_explicit(EncodingBundle& b, Rng& rng, const DecodeOptions& opt) {
    const Topology& t = b.topo;
    Context ctx(t, b.plan, b.J);
    DecodeResult res;
    QuantumState& s = b.state;
    auto pending = [&](EncodingBundle::Pending::Kind k, int idx) {
        for (const auto& p : b.pending) {
            if (p.kind == k && p.index == idx) return true;
        }
        return false;
    };
    auto measure_labels = [&](int w) {
        TeleportParams p = ctx.params(w);
        std::optional<Bits> forced;
        if (auto c = chosen(opt, w)) {
            Bits f = p.z_label(c->first);
            f.append(p.x_label(c->second));
            forced = f;
        }
        MeasureResult m = s.measure_and_remove({wreg("z", w), wreg("x", w)}, &rng, forced ? &*forced : nullptr);
        res.prob *= m.prob;
        int k = p.kappa();
        b.measured[w] = {m.outcome.slice(0, k), m.outcome.slice(k, k)};
        res.label_log.push_back({w, b.measured[w]});
    };

    for (int i = 0; i < t.n; i++) {
        int w = t.input_wire[i];
        if (pending(EncodingBundle::Pending::Kind::kInputTp, i)) run_input_tp(s, ctx, i);
        measure_labels(w);
        s.measure_and_remove({in_name(i), wreg("e1", w), wreg("b", w)}, &rng);
    }
    for (int g : evaluation_order(t)) {
        const auto& node = t.gates[g];
        const auto& sig = b.plan.sig[g];
        if (pending(EncodingBundle::Pending::Kind::kGateEnc, g)) run_gate_enc(s, ctx, b.circuit.gates[g], g);
        std::vector<Bits> labels;
        for (int v : node.inwires) {
            labels.push_back(b.measured.at(v).first);
            labels.push_back(b.measured.at(v).second);
        }
        Bits payload = cdec(sig.n_in, sig.m_out, b.offline[g], labels, b.plan.cre);
        size_t pos = 0;
        for (int j = 0; j < node.arity(); j++) {
            int w = node.outwires[j];
            int k = b.plan.kappa_of(w);
            size_t len = gadget_encoding_length(k);
            int bad = 0;
            RandomizerElement corr = parse_corr_lenient(payload.slice(pos, len), k, &bad);
            res.invalid_slots += bad;
            pos += len;
            RegisterBinding bind = wire_binding(node.inwires[j], w);
            apply_gate_list(s, randomizer_circuit(corr), bind);
            apply_gate_list(s, lambda3(k), bind);
            measure_labels(w);
            s.measure_and_remove({wreg("e2", node.inwires[j]), wreg("e1", w), wreg("b", w)}, &rng);
        }
    }
    res.state = finish_outputs(std::move(s), b, b.measured);
    return res;
}

DecodeResult dec_compressed(EncodingBundle& b, Rng& rng, const DecodeOptions& opt) {
    const Topology& t = b.topo;
    Context ctx(t, b.plan, b.J);
    DecodeResult res;
    QuantumState& s = b.state;
    std::vector<std::pair<int, int>> keys(t.num_wires(), {0, 0});
    auto record = [&](int w, const Bits& z, const Bits& x) {
        b.measured[w] = {z, x};
        res.label_log.push_back({w, b.measured[w]});
    };

    for (int i = 0; i < t.n; i++) {
        int w = t.input_wire[i];
        TeleportParams p = ctx.params(w);
        if (b.classical_positions.count(i)) {
            auto it = b.classical_online.find(i);
            if (it == b.classical_online.end())
                throw IntegrityError("missing online encoding for classical input " + std::to_string(i));
            const Bits& bits = it->second;
            size_t k = size_t(p.kappa());
            if (bits.size() != 3 + 2 * k)
                throw IntegrityError("classical input " + std::to_string(i) + " has the wrong length");
            Bits z = bits.slice(1, k), x = bits.slice(1 + k, k);
            keys[w] = {find_key(z, p.lz0, p.lz1, "classical z", w), find_key(x, p.lx0, p.lx1, "classical x", w)};
            s.add_zeros(wreg("e2", w), 1);
            if (bits[2 + 2 * k]) s.apply(gates::X(), {{wreg("e2", w), 0}});
            record(w, z, x);
            continue;
        }
        TeleportOutcome o = compressed_teleport(s, in_name(i), p, &rng, chosen(opt, w));
        res.prob *= o.prob;
        s.rename(in_name(i), wreg("e2", w));
        keys[w] = {o.d, o.e};
        record(w, o.z_label, o.x_label);
    }
    for (int g : evaluation_order(t)) {
        const auto& node = t.gates[g];
        const auto& sig = b.plan.sig[g];
        const UniversalGate& gate = b.circuit.gates[g];
        std::vector<Bits> labels;
        for (int v : node.inwires) {
            labels.push_back(b.measured.at(v).first);
            labels.push_back(b.measured.at(v).second);
        }
        Bits payload = cdec(sig.n_in, sig.m_out, b.offline[g], labels, b.plan.cre);
        const int p = node.arity();
        uint64_t word = 0;
        for (int j = 0; j < p; j++) {
            word |= uint64_t(keys[node.inwires[j]].first) << (2 * p - 1 - 2 * j);
            word |= uint64_t(keys[node.inwires[j]].second) << (2 * p - 2 - 2 * j);
        }
        std::vector<PXElement> R = correction_residues(gate, word);
        size_t pos = 0;
        for (int j = 0; j < p; j++) {
            int w = node.outwires[j];
            Bits expect = encode_gadget(corr_gadget(b.J.A[w], R[j], ctx.params(w)));
            if (payload.slice(pos, expect.size()) != expect)
                throw IntegrityError("decoded correction gadget for wire " + std::to_string(w) +
                                     " is not the one the evaluation needs");
            pos += expect.size();
        }
        std::vector<QubitAddr> carriers;
        for (int v : node.inwires) carriers.push_back({wreg("e2", v), 0});
        s.apply(gate.matrix(), carriers);
        for (int j = 0; j < p; j++) {
            s.apply(R[j].matrix(), {carriers[j]});
            int w = node.outwires[j];
            TeleportOutcome o = compressed_teleport(s, carriers[j].reg, ctx.params(w), &rng, chosen(opt, w));
            res.prob *= o.prob;
            s.rename(carriers[j].reg, wreg("e2", w));
            keys[w] = {o.d, o.e};
            record(w, o.z_label, o.x_label);
        }
    }
    res.state = finish_outputs(std::move(s), b, b.measured);
    return res;
}

}  // namespace

// ---------------------------------------------------------------- planning

uint64_t gadget_bits_saturating(uint64_t kappa) { return sat_add(32, randomizer_bits_saturating(kappa)); }

uint64_t LabelPlan::max_kappa() const {
    uint64_t m = 0;
    for (auto k : kappa) m = std::max(m, k);
    return m;
}

int LabelPlan::kappa_of(int wire) const {
    uint64_t k = kappa.at(wire);
    if (k > uint64_t(INT_MAX)) throw BudgetError("label length on wire " + std::to_string(wire) + " is too large");
    return int(k);
}

std::string LabelPlan::report() const {
    std::ostringstream os;
    for (const auto& l : layers) {
        os << "layer " << l.layer << ": max_kappa=" << l.max_kappa << " bits=" << l.classical_bits << "\n";
    }
    return os.str();
}

std::string LabelPlan::summary() const {
    std::ostringstream os;
    os << "wires=" << kappa.size() << " gates=" << sig.size() << " layers=" << layers.size()
       << " max_kappa=" << max_kappa() << " total_bits=" << total_bits << " cre=" << cre.describe();
    return os.str();
}

LabelPlan plan_labels(const Topology& t, const CreParams& p, uint64_t budget_bits) {
    LabelPlan plan;
    plan.cre = p;
    const int W = t.num_wires();
    plan.kappa.assign(W, 0);
    plan.layer.assign(W, 0);
    plan.sig.resize(t.num_gates());
    std::vector<int> gate_layer(t.num_gates(), 0);
    for (int w = 0; w < W; w++) {
        if (t.is_output_wire(w)) plan.kappa[w] = 1;
    }
    std::vector<int> order = evaluation_order(t);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int g = *it;
        const auto& node = t.gates[g];
        uint64_t m = 0;
        int lay = 0;
        for (int w : node.outwires) {
            m = sat_add(m, gadget_bits_saturating(plan.kappa[w]));
            lay = std::max(lay, plan.layer[w]);
        }
        lay += 1;
        auto& s = plan.sig[g];
        s.n_in = 2 * node.arity();
        s.m_out = m;
        s.offline_bits = sat_mul(uint64_t{1} << s.n_in, m);
        s.randomness_bits = randomness_length(s.n_in, m, p);
        uint64_t k = label_length(s.n_in, m, p);
        for (int w : node.inwires) {
            plan.kappa[w] = k;
            plan.layer[w] = lay;
        }
        gate_layer[g] = lay;
    }

    int top = 0;
    for (int w = 0; w < W; w++) top = std::max(top, plan.layer[w]);
    plan.layers.resize(top + 1);
    for (int l = 0; l <= top; l++) plan.layers[l].layer = l;
    for (int w = 0; w < W; w++) {
        auto& L = plan.layers[plan.layer[w]];
        L.max_kappa = std::max(L.max_kappa, plan.kappa[w]);
        // Randomizer plus the six twirl and dictionary bits.
        uint64_t bits = 6;
        if (!t.is_input_wire(w)) bits = sat_add(bits, randomizer_bits_saturating(plan.kappa[w]));
        else bits = sat_add(bits, 1);
        L.classical_bits = sat_add(L.classical_bits, bits);
    }
    for (int g = 0; g < t.num_gates(); g++) {
        auto& L = plan.layers[gate_layer[g]];
        L.classical_bits = sat_add(L.classical_bits, sat_add(plan.sig[g].offline_bits, plan.sig[g].randomness_bits));
    }
    uint64_t total = 0;
    int offending = -1;
    for (const auto& L : plan.layers) {
        total = sat_add(total, L.classical_bits);
        if (offending < 0 && total > budget_bits) offending = L.layer;
    }
    plan.total_bits = total;
    if (offending >= 0) {
        throw BudgetError("classical size exceeds the budget of " + std::to_string(budget_bits) + " bits at layer " +
                          std::to_string(offending) + "\n" + plan.report());
    }
    return plan;
}

// ---------------------------------------------------------------- randomness

bool RandomnessJ::operator==(const RandomnessJ& x) const {
    return r == x.r && A == x.A && s == x.s && t == x.t && o == x.o && epr == x.epr;
}

RandomnessJ sample_randomness(const Topology& t, const LabelPlan& plan, Rng& rng) {
    RandomnessJ J;
    for (int g = 0; g < t.num_gates(); g++) J.r.push_back(rng.bits(plan.sig[g].randomness_bits));
    for (int w = 0; w < t.num_wires(); w++) {
        J.A.push_back(t.is_input_wire(w) ? RandomizerElement::identity(1) : sample_randomizer(plan.kappa_of(w), rng));
        J.s.push_back({int(rng.bit()), int(rng.bit())});
        J.t.push_back({int(rng.bit()), int(rng.bit())});
        J.o.push_back({int(rng.bit()), int(rng.bit())});
    }
    J.epr = rng.bits(t.n);
    return J;
}

Bits RandomnessJ::serialize() const {
    Bits out;
    for (const auto& x : r) out.append(x);
    for (size_t w = 0; w < A.size(); w++) {
        out.append(randomizer_encode(A[w]));
        out.append_uint(uint64_t(s[w][0] << 1 | s[w][1]), 2);
        out.append_uint(uint64_t(t[w][0] << 1 | t[w][1]), 2);
        out.append_uint(uint64_t(o[w][0] << 1 | o[w][1]), 2);
    }
    out.append(epr);
    return out;
}

RandomnessJ RandomnessJ::parse(const Bits& bits, const Topology& t, const LabelPlan& plan) {
    RandomnessJ J;
    size_t pos = 0;
    auto take = [&](size_t n) {
        if (pos + n > bits.size()) throw ParseError("randomness string is too short");
        Bits b = bits.slice(pos, n);
        pos += n;
        return b;
    };
    for (int g = 0; g < t.num_gates(); g++) J.r.push_back(take(plan.sig[g].randomness_bits));
    for (int w = 0; w < t.num_wires(); w++) {
        int k = t.is_input_wire(w) ? 1 : plan.kappa_of(w);
        J.A.push_back(randomizer_decode(take(RandomizerElement::encoded_bits(k)), k));
        Bits st = take(6);
        J.s.push_back({st[0], st[1]});
        J.t.push_back({st[2], st[3]});
        J.o.push_back({st[4], st[5]});
    }
    J.epr = take(t.n);
    if (pos != bits.size()) throw ParseError("randomness string is too long");
    return J;
}

TeleportParams wire_params(const Topology& t, const LabelPlan& plan, const RandomnessJ& J, int w) {
    check_randomness(t, plan, J);
    return Context(t, plan, J).params(w);
}

Bits classical_input_encoding(const Topology& t, const LabelPlan& plan, const RandomnessJ& J, int input, bool value) {
    if (input < 0 || input >= t.n) throw Error("classical input position out of range");
    TeleportParams p = wire_params(t, plan, J, t.input_wire[input]);
    ClassicalTpOutput o = classical_tp_eval(p, value, J.epr[input]);
    Bits out;
    out.push_back(o.u);
    out.append(o.z);
    out.append(o.x);
    out.push_back(o.v);
    out.push_back(o.up);
    return out;
}

std::string backend_name(Backend b) { return b == Backend::kExplicit ? "explicit" : "compressed"; }

Backend parse_backend(const std::string& s) {
    if (s == "explicit") return Backend::kExplicit;
    if (s == "compressed") return Backend::kCompressed;
    throw ParseError("unknown backend: " + s);
}

int explicit_peak_qubits(const Topology& t, const LabelPlan& plan, int base_qubits, bool eager) {
    if (eager) {
        int total = base_qubits;
        for (int w = 0; w < t.num_wires(); w++) total += wire_qubits(plan.kappa_of(w));
        return total;
    }
    // Each step allocates the registers of the wires it teleports into and
    // frees as many as it consumes, so the live count returns to the base.
    int step = 0;
    for (int i = 0; i < t.n; i++) step = std::max(step, wire_qubits(plan.kappa_of(t.input_wire[i])));
    for (const auto& node : t.gates) {
        int sum = 0;
        for (int w : node.outwires) sum += wire_qubits(plan.kappa_of(w));
        step = std::max(step, sum);
    }
    return base_qubits + step;
}

// ---------------------------------------------------------------- enc / dec

EncodingBundle enc_internal(const Circuit& c, const QuantumState& full_input, const RandomnessJ& J,
                            const EncodeOptions& opt) {
    const Topology& t = c.topo;
    EncodingBundle b;
    b.backend = opt.backend;
    b.topo = t;
    b.plan = plan_labels(t, opt.cre, opt.budget_bits);
    b.circuit = c;
    b.J = J;
    b.classical_positions = opt.classical_positions;
    check_randomness(t, b.plan, J);
    for (int i : opt.classical_positions) {
        if (i < 0 || i >= t.n) throw Error("classical input position out of range");
    }
    for (const auto& name : full_input.regs().names()) {
        if (!is_terminal_name(name, "in", t.n)) b.side.push_back(name);
    }
    for (int i = 0; i < t.n; i++) {
        bool present = full_input.regs().has(in_name(i));
        bool classical = opt.classical_positions.count(i) > 0;
        if (classical && present) throw Error("classical input " + in_name(i) + " must not be a quantum register");
        if (!classical && !present) throw Error("missing input register " + in_name(i));
        if (present && full_input.regs().width(in_name(i)) != 1)
            throw Error("input register " + in_name(i) + " must be one qubit");
    }

    Context ctx(t, b.plan, J);
    for (int g = 0; g < t.num_gates(); g++) {
        b.offline.push_back(cre_offline(gate_correction_fn(ctx, c.gates[g], g), J.r[g], b.plan.cre));
    }
    for (int j = 0; j < t.n; j++) {
        int w = t.output_wire[j];
        TeleportParams p = ctx.params(w);
        b.dict[w] = {p.lz0, p.lz1, p.lx0, p.lx1};
    }
    for (const auto& [i, v] : opt.classical_values) {
        if (!opt.classical_positions.count(i)) throw Error("value given for a non-classical input");
        b.classical_online[i] = classical_input_encoding(t, b.plan, J, i, v);
    }

    b.state = full_input;
    if (opt.backend == Backend::kCompressed) return b;

    // Explicit backend: classical inputs become basis qubits.
    if (b.plan.max_kappa() > uint64_t(opt.kappa_cap)) {
        throw BudgetError("explicit backend supports label length <= " + std::to_string(opt.kappa_cap) + ", plan needs " +
                          std::to_string(b.plan.max_kappa()) + " (use segment bits 0 or the compressed backend)");
    }
    for (int i : opt.classical_positions) {
        auto it = opt.classical_values.find(i);
        if (it == opt.classical_values.end()) throw Error("explicit backend needs a value for classical input " + in_name(i));
        b.state.add_zeros(in_name(i), 1);
        if (it->second) b.state.apply(gates::X(), {{in_name(i), 0}});
    }
    b.classical_positions.clear();
    b.classical_online.clear();
    int base = b.state.num_qubits();
    int cap = b.state.is_pure() ? opt.qubit_cap : std::min(opt.qubit_cap, Tolerances::kDensityQubitCap);
    bool eager = !opt.force_lazy && explicit_peak_qubits(t, b.plan, base, true) <= cap;
    if (!eager && explicit_peak_qubits(t, b.plan, base, false) > cap) {
        throw BudgetError("explicit backend needs " + std::to_string(explicit_peak_qubits(t, b.plan, base, false)) +
                          " live qubits, cap is " + std::to_string(cap));
    }
    std::vector<int> order = evaluation_order(t);
    if (eager) {
        for (int i = 0; i < t.n; i++) run_input_tp(b.state, ctx, i);
        for (int g : order) run_gate_enc(b.state, ctx, c.gates[g], g);
    } else {
        for (int i = 0; i < t.n; i++) b.pending.push_back({EncodingBundle::Pending::Kind::kInputTp, i});
        for (int g : order) b.pending.push_back({EncodingBundle::Pending::Kind::kGateEnc, g});
    }
    return b;
}

EncodingBundle enc(const Circuit& c, const QuantumState& input, const RandomnessJ& J, const EncodeOptions& opt) {
    QuantumState s = input;
    for (int i : c.topo.zero_inputs) {
        if (s.regs().has(in_name(i))) throw Error("input register " + in_name(i) + " is a zero input");
        if (opt.classical_positions.count(i)) throw Error("a zero input cannot be classical");
        s.add_zeros(in_name(i), 1);
    }
    return enc_internal(c, s, J, opt);
}

DecodeResult dec(EncodingBundle bundle, Rng& rng, const DecodeOptions& opt) {
    if (int(bundle.offline.size()) != bundle.topo.num_gates()) throw IntegrityError("bundle has the wrong gate count");
    for (int g = 0; g < bundle.topo.num_gates(); g++) {
        uint64_t want = bundle.plan.sig[g].offline_bits;
        if (bundle.offline[g].size() != want)
            throw IntegrityError("offline string of gate " + std::to_string(g) + " has the wrong length");
    }
    if (bundle.backend == Backend::kExplicit) return dec_explicit(bundle, rng, opt);
    return dec_compressed(bundle, rng, opt);
}

EncodingBundle sim(const Topology& t, const QuantumState& y, Rng& rng, const EncodeOptions& opt) {
    std::vector<int> xi = io_bijection(t);
    QuantumState s = y;
    EncodeOptions o = opt;
    for (int i = 0; i < t.n; i++) {
        int j = xi[i];
        if (opt.classical_positions.count(i)) {
            if (!t.is_discard(j)) throw Error("sim: classical input " + in_name(i) + " must reach a discarded output");
            if (!o.classical_values.count(i)) o.classical_values[i] = false;
            continue;
        }
        if (t.is_discard(j)) {
            s.add_zeros(in_name(i), 1);
        } else {
            if (!s.regs().has(out_name(j))) throw Error("sim: missing output register " + out_name(j));
            s.rename(out_name(j), in_name(i));
        }
    }
    LabelPlan plan = plan_labels(t, opt.cre, opt.budget_bits);
    RandomnessJ J = sample_randomness(t, plan, rng);
    return enc_internal(empty_circuit(t), s, J, o);
}

// ---------------------------------------------------------------- bundle files

namespace {

std::string hex_or_dash(const Bits& b) { return b.empty() ? "-" : b.to_hex(); }

Bits read_hex(std::istream& is) {
    size_t n;
    std::string hex;
    if (!(is >> n >> hex)) throw ParseError("bad bit field in bundle");
    if (n == 0) return Bits();
    return Bits::from_hex(hex, n);
}

void write_bits(std::ostream& os, const Bits& b) { os << " " << b.size() << " " << hex_or_dash(b); }

}  // namespace

std::string write_bundle(const EncodingBundle& b) {
    std::ostringstream os;
    os << "qgc-bundle v1\n";
    os << "backend " << backend_name(b.backend) << "\n";
    os << "digest " << b.digest() << "\n";
    os << "cre " << (b.plan.cre.mode == CreParams::Mode::kPrg ? "prg" : "it") << " " << b.plan.cre.segment_bits << " "
       << b.plan.cre.seed_bits << "\n";
    os << "side";
    for (const auto& s : b.side) os << " " << s;
    os << "\nclassical";
    for (int i : b.classical_positions) os << " " << i;
    os << "\n";
    for (const auto& p : b.pending) {
        os << "pending " << (p.kind == EncodingBundle::Pending::Kind::kInputTp ? "input" : "gate") << " " << p.index
           << "\n";
    }
    for (size_t g = 0; g < b.offline.size(); g++) {
        os << "offline " << g;
        write_bits(os, b.offline[g]);
        os << "\n";
    }
    for (const auto& [w, d] : b.dict) {
        os << "dict " << w;
        for (const auto& x : d) write_bits(os, x);
        os << "\n";
    }
    for (const auto& [i, bits] : b.classical_online) {
        os << "online " << i;
        write_bits(os, bits);
        os << "\n";
    }
    os << "randomness";
    write_bits(os, b.J.serialize());
    os << "\nbegin circuit\n" << print_circuit(b.circuit) << "end circuit\n";
    os << "begin state\n" << dump_state(b.state) << "end state\n";
    return os.str();
}

EncodingBundle read_bundle(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "qgc-bundle v1") throw ParseError("not a qgc-bundle v1 file");
    EncodingBundle b;
    std::string digest;
    CreParams cre;
    std::optional<Bits> jbits;
    bool have_circuit = false, have_state = false;
    auto block = [&](const std::string& end) {
        std::string body, l;
        while (std::getline(is, l)) {
            if (l == end) return body;
            body += l + "\n";
        }
        throw ParseError("unterminated block, expected '" + end + "'");
    };
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "backend") {
            std::string v;
            ls >> v;
            b.backend = parse_backend(v);
        } else if (kw == "digest") {
            ls >> digest;
        } else if (kw == "cre") {
            std::string mode;
            if (!(ls >> mode >> cre.segment_bits >> cre.seed_bits)) throw ParseError("bad cre line");
            if (mode != "prg" && mode != "it") throw ParseError("bad cre mode: " + mode);
            cre.mode = mode == "prg" ? CreParams::Mode::kPrg : CreParams::Mode::kInformationTheoretic;
        } else if (kw == "side") {
            std::string s;
            while (ls >> s) b.side.push_back(s);
        } else if (kw == "classical") {
            int i;
            while (ls >> i) b.classical_positions.insert(i);
        } else if (kw == "pending") {
            std::string k;
            int idx;
            if (!(ls >> k >> idx)) throw ParseError("bad pending line");
            if (k != "input" && k != "gate") throw ParseError("bad pending kind: " + k);
            b.pending.push_back({k == "input" ? EncodingBundle::Pending::Kind::kInputTp
                                              : EncodingBundle::Pending::Kind::kGateEnc,
                                 idx});
        } else if (kw == "offline") {
            size_t g;
            if (!(ls >> g) || g != b.offline.size()) throw ParseError("offline blocks out of order");
            b.offline.push_back(read_hex(ls));
        } else if (kw == "dict") {
            int w;
            if (!(ls >> w)) throw ParseError("bad dict line");
            std::array<Bits, 4> d;
            for (auto& x : d) x = read_hex(ls);
            b.dict[w] = d;
        } else if (kw == "online") {
            int i;
            if (!(ls >> i)) throw ParseError("bad online line");
            b.classical_online[i] = read_hex(ls);
        } else if (kw == "randomness") {
            jbits = read_hex(ls);
        } else if (line == "begin circuit") {
            b.circuit = parse_circuit(block("end circuit"));
            have_circuit = true;
        } else if (line == "begin state") {
            b.state = parse_state(block("end state"));
            have_state = true;
        } else {
            throw ParseError("unknown bundle line: " + line);
        }
    }
    if (!have_circuit || !have_state || !jbits) throw ParseError("bundle is missing a section");
    b.topo = b.circuit.topo;
    if (b.topo.digest() != digest) throw IntegrityError("bundle digest does not match its topology");
    b.plan = plan_labels(b.topo, cre, UINT64_MAX);
    b.J = RandomnessJ::parse(*jbits, b.topo, b.plan);
    return b;
}

// ---------------------------------------------------------------- group-randomizing encoding

namespace {

std::vector<QubitAddr> terminal_regs(const char* prefix, int n) {
    std::vector<QubitAddr> q;
    for (int i = 0; i < n; i++) q.push_back({std::string(prefix) + std::to_string(i), 0});
    return q;
}

}  // namespace

GrEncoding gr_encode_with(const Circuit& c, const QuantumState& x, const Tableau& R) {
    const int n = c.topo.n;
    if (R.n() != n) throw Error("randomizer width does not match the circuit");
    GrEncoding e;
    e.residual = circuit_tableau(c) * R.inverse();
    e.state = x;
    e.state.apply(R.matrix(), terminal_regs("in", n));
    return e;
}

GrEncoding gr_encode(const Circuit& c, const QuantumState& x, Rng& rng) {
    return gr_encode_with(c, x, sample_clifford(c.topo.n, rng));
}

QuantumState gr_decode(const GrEncoding& e) {
    const int n = e.residual.n();
    QuantumState s = e.state;
    s.apply(e.residual.matrix(), terminal_regs("in", n));
    std::vector<std::string> order;
    for (const auto& name : s.regs().names()) {
        if (!is_terminal_name(name, "in", n)) order.push_back(name);
    }
    for (int j = 0; j < n; j++) {
        s.rename(in_name(j), out_name(j));
        order.push_back(out_name(j));
    }
    return s.reordered(order);
}

GrEncoding gr_sim_with(const QuantumState& y, int n, const Tableau& E) {
    if (E.n() != n) throw Error("randomizer width does not match");
    GrEncoding e;
    e.residual = E;
    e.state = y;
    e.state.apply(E.inverse().matrix(), terminal_regs("out", n));
    for (int j = 0; j < n; j++) e.state.rename(out_name(j), in_name(j));
    return e;
}

GrEncoding gr_sim(const QuantumState& y, int n, Rng& rng) { return gr_sim_with(y, n, sample_clifford(n, rng)); }

}  // namespace qgc
