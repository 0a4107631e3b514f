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

#include "qgc/verify.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

namespace qgc::verify {

namespace {

Check make_check(std::string name, double value, double bound, std::string detail = {}) {
    Check c;
    c.name = std::move(name);
    c.value = value;
    c.bound = bound;
    c.pass = value <= bound;
    c.detail = std::move(detail);
    return c;
}

Check make_floor_check(std::string name, double value, double bound, std::string detail = {}) {
    Check c = make_check(std::move(name), value, bound, std::move(detail));
    c.at_least = true;
    c.pass = value >= bound;
    return c;
}

std::vector<cd> random_amplitudes(size_t dim, Rng& rng) {
    std::vector<cd> a(dim);
    double n = 0;
    for (auto& x : a) {
        x = cd(rng.normal(), rng.normal());
        n += std::norm(x);
    }
    for (auto& x : a) x /= std::sqrt(n);
    return a;
}

std::vector<PXElement> all_px_cosets() {
    std::vector<PXElement> out;
    for (int a = 0; a < 2; a++) {
        for (int b = 0; b < 4; b++) out.push_back(PXElement::make(0, a, b));
    }
    return out;
}

QuantumState teleport_input(int kappa, const std::vector<cd>& psi) {
    return make_state(gadget_registers(kappa, false, true),
                      {RegisterInit::amps("u", psi), RegisterInit::zeros("z"), RegisterInit::zeros("x"),
                       RegisterInit::epr("v", "up")});
}

void set_basis(QuantumState& s, const std::string& reg, const Bits& bits) {
    for (size_t j = 0; j < bits.size(); j++) {
        if (bits.get(j)) s.apply(gates::X(), {{reg, int(j)}});
    }
}

/// Live inputs plus one reference qubit, in a random joint pure state.
QuantumState entangled_input(const Topology& t, Rng& rng) {
    RegisterMap regs;
    regs.add("ref", 1);
    for (int i = 0; i < t.n; i++) {
        if (!t.is_zero(i)) regs.add("in" + std::to_string(i), 1);
    }
    return QuantumState::from_amplitudes(regs, random_amplitudes(size_t{1} << regs.total(), rng));
}

QuantumState one_qubit(const std::vector<GateMatrix>& gs, bool adjoint_last = false) {
    QuantumState s = QuantumState::zeros(RegisterMap{{"in0", 1}});
    for (size_t k = 0; k < gs.size(); k++) {
        const bool adj = adjoint_last && k + 1 == gs.size();
        s.apply(adj ? gs[k].adjoint() : gs[k], {{"in0", 0}});
    }
    return s;
}

EncodeOptions compressed_options() {
    EncodeOptions o;
    o.backend = Backend::kCompressed;
    o.cre = CreParams::prg(8);
    return o;
}

// Classical view of one decode: a shape signature and a bit per coordinate.
struct View {
    std::string shape;
    std::vector<bool> bits;
};

View decode_view(const Circuit& c, const QuantumState& x, Rng& rng, double* out_err) {
    EncodeOptions opt = compressed_options();
    LabelPlan plan = plan_labels(c.topo, opt.cre, opt.budget_bits);
    RandomnessJ J = sample_randomness(c.topo, plan, rng);
    EncodingBundle b = enc(c, x, J, opt);
    View v;
    for (const Bits& off : b.offline) {
        v.shape += std::to_string(off.size()) + ",";
        v.bits.push_back(off.parity());
    }
    DecodeResult r = dec(std::move(b), rng);
    for (const auto& [w, labels] : r.label_log) {
        v.shape += fmt::format("{}:{}/{},", w, labels.first.size(), labels.second.size());
        v.bits.push_back(labels.first.parity());
        v.bits.push_back(labels.second.parity());
    }
    QuantumState want = reference_evaluate(c, x).reordered(r.state.regs().names());
    *out_err = std::max(*out_err, trace_distance(r.state, want));
    return v;
}

}  // namespace

bool SuiteReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"identities", "twirl", "cre-privacy", "correctness", "residue", "gr"};
    return names;
}

// ---------------------------------------------------------------- oracles

std::vector<cd> teleport_closed_form(const TeleportParams& p, const std::vector<cd>& psi) {
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

double twirl_distance(const TeleportParams& labels, const std::vector<cd>& pair) {
    const int kappa = labels.kappa();
    RegisterMap su{{"side", 1}, {"u", 1}};
    RegisterMap rest{{"z", kappa}, {"x", kappa}, {"v", 1}, {"up", 1}};
    QuantumState base = tensor(QuantumState::from_amplitudes(su, pair),
                               make_state(rest, {RegisterInit::zeros("z"), RegisterInit::zeros("x"),
                                                 RegisterInit::epr("v", "up")}));
    std::vector<std::pair<double, QuantumState>> twirled;
    for (int st = 0; st < 16; st++) {
        TeleportParams p = labels;
        p.sz = st >> 3 & 1;
        p.sx = st >> 2 & 1;
        p.tz = st >> 1 & 1;
        p.tx = st & 1;
        QuantumState s = base;
        apply_gate_list(s, tp_circuit(p));
        twirled.emplace_back(1.0 / 16, std::move(s));
    }
    QuantumState got = mixture(twirled);

    std::vector<std::pair<double, QuantumState>> want;
    RegisterMap frame{{"u", 1}, {"z", kappa}, {"x", kappa}, {"v", 1}};
    for (int k = 0; k < 16; k++) {
        const int d = k >> 3 & 1, e = k >> 2 & 1, ub = k >> 1 & 1, vb = k & 1;
        QuantumState data = QuantumState::from_amplitudes(su, pair);
        if (d) data.apply(gates::Z(), {{"u", 0}});
        if (e) data.apply(gates::X(), {{"u", 0}});
        data.rename("u", "up");
        QuantumState f = QuantumState::zeros(frame);
        if (ub) f.apply(gates::X(), {{"u", 0}});
        if (vb) f.apply(gates::X(), {{"v", 0}});
        set_basis(f, "z", labels.z_label(d));
        set_basis(f, "x", labels.x_label(e));
        want.emplace_back(1.0 / 16, tensor(data, f).reordered(got.regs().names()));
    }
    return trace_distance(got, mixture(want));
}

ResidueEstimate residue_distance(const Circuit& a, const QuantumState& xa, const Circuit& b, const QuantumState& xb,
                                 int samples, Rng& rng) {
    ResidueEstimate est;
    std::map<std::string, int> shapes_a, shapes_b;
    std::vector<double> ones_a, ones_b;
    auto collect = [&](const Circuit& c, const QuantumState& x, std::map<std::string, int>& shapes,
                       std::vector<double>& ones) {
        for (int k = 0; k < samples; k++) {
            View v = decode_view(c, x, rng, &est.output_error);
            shapes[v.shape]++;
            if (ones.size() < v.bits.size()) ones.resize(v.bits.size(), 0.0);
            for (size_t i = 0; i < v.bits.size(); i++) ones[i] += v.bits[i];
        }
    };
    collect(a, xa, shapes_a, ones_a);
    collect(b, xb, shapes_b, ones_b);

    double shape_tv = 0;
    for (const auto& [s, n] : shapes_a) {
        auto it = shapes_b.find(s);
        shape_tv += std::abs(double(n) - (it == shapes_b.end() ? 0.0 : double(it->second))) / samples;
    }
    for (const auto& [s, n] : shapes_b) {
        if (!shapes_a.count(s)) shape_tv += double(n) / samples;
    }
    est.distance = shape_tv / 2;
    if (est.distance == 0) {
        for (size_t i = 0; i < ones_a.size(); i++) {
            est.distance = std::max(est.distance, std::abs(ones_a[i] - ones_b[i]) / samples);
        }
    }
    return est;
}

// ---------------------------------------------------------------- check groups

std::vector<Check> identity_checks(const Config& cfg) {
    Rng rng(split_seed(cfg.seed, "identities", 0));
    std::vector<Check> out;
    for (int kappa = 1; kappa <= 3; kappa++) {
        double lam = 0, cid = 0;
        for (const PXElement& R : all_px_cosets()) {
            for (int s = 0; s < 4; s++) {
                for (int trial = 0; trial < 10; trial++) {
                    TeleportParams p = TeleportParams::sample(kappa, rng);
                    p.sz = s >> 1;
                    p.sx = s & 1;
                    lam = std::max(lam, lambda_identity_distance(R, p));
                    cid = std::max(cid, c_identity_distance(R, rng.bits(kappa), s >> 1, s & 1));
                }
            }
        }
        out.push_back(make_check(fmt::format("lambda-identity/kappa={}", kappa), lam, cfg.tol_unitary,
                                 "8 corrections x 4 (s_z,s_x) x 10 label draws"));
        out.push_back(make_check(fmt::format("c-identity/kappa={}", kappa), cid, cfg.tol_unitary,
                                 "8 corrections x 4 (s_z,s_x) x 10 draws of r"));
        int bad = 0;
        for (uint64_t rv = 0; rv < (uint64_t{1} << kappa); rv++) bad += !gamma_phase_law(Bits::from_uint(rv, kappa));
        out.push_back(make_check(fmt::format("phase-law/kappa={}", kappa), bad, 0, "exhaustive r"));
    }
    return out;
}

std::vector<Check> teleport_checks(const Config& cfg) {
    Rng rng(split_seed(cfg.seed, "teleport", 0));
    std::vector<Check> out;
    for (int kappa = 1; kappa <= 2; kappa++) {
        double worst = 0;
        for (int trial = 0; trial < 50; trial++) {
            TeleportParams p = TeleportParams::sample(kappa, rng);
            std::vector<cd> psi = random_amplitudes(2, rng);
            QuantumState s = teleport_input(kappa, psi);
            apply_gate_list(s, tp_circuit(p));
            std::vector<cd> want = teleport_closed_form(p, psi);
            for (size_t i = 0; i < want.size(); i++) worst = std::max(worst, std::abs(s.amplitude(i) - want[i]));
        }
        out.push_back(make_check(fmt::format("teleport-closed-form/kappa={}", kappa), worst, cfg.tol_unitary,
                                 "50 random states, labels and twirl bits"));
    }
    return out;
}

std::vector<Check> twirl_checks(const Config& cfg) {
    Rng rng(split_seed(cfg.seed, "twirl", 0));
    std::vector<Check> out;
    for (int kappa = 1; kappa <= 2; kappa++) {
        double worst = 0;
        for (int trial = 0; trial < 5; trial++) {
            TeleportParams p = TeleportParams::sample(kappa, rng);
            if (trial == 0) p.lz1 = p.lz0;  // colliding labels are allowed too
            worst = std::max(worst, twirl_distance(p, random_amplitudes(4, rng)));
        }
        out.push_back(make_check(fmt::format("twirl/kappa={}", kappa), worst, cfg.tol_unitary,
                                 "all 16 twirl bits, entangled side qubit, 5 label draws"));
    }
    return out;
}

std::vector<Check> cre_privacy_checks(const Config& cfg) {
    Rng rng(split_seed(cfg.seed, "cre-privacy", 0));
    std::vector<Check> out;
    // (n_in, m_out) shapes whose randomness stays enumerable.
    const std::vector<std::pair<int, int>> shapes = {{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}};
    for (int sb = 1; sb <= 2; sb++) {
        CreParams p = CreParams::with_segments(sb);
        for (int k = 0; k < 10; k++) {
            auto [n, m] = shapes[k % shapes.size()];
            std::vector<Bits> table;
            for (int w = 0; w < (1 << n); w++) table.push_back(rng.bits(m));
            FnSignature f = FnSignature::from_table(n, m, table);
            uint64_t x = rng.below(uint64_t{1} << n);
            bool same = cre_privacy_exhaustive(f, x, p);
            out.push_back(make_check(fmt::format("cre-privacy/segment_bits={}/n_in={}/m_out={}/pair={}", sb, n, m, k),
                                     same ? 0.0 : 1.0, 0.0, "encode and simulator multisets over all randomness"));
        }
    }
    return out;
}

std::vector<Check> correctness_checks(const Config& cfg) {
    double worst = 0, worst_ref = 0;
    int t_gates = 0;
    for (int k = 0; k < cfg.instances; k++) {
        Rng rng(split_seed(cfg.seed, "correctness", uint64_t(k)));
        RandomCircuitOptions ro;
        ro.inputs = 1 + int(rng.below(3));
        ro.gates = 1 + int(rng.below(3));
        ro.require_t = true;
        Circuit c = random_circuit(ro, rng);
        for (const auto& g : c.gates) t_gates += g.is_t;
        QuantumState x = entangled_input(c.topo, rng);
        EncodeOptions opt = compressed_options();
        LabelPlan plan = plan_labels(c.topo, opt.cre, opt.budget_bits);
        RandomnessJ J = sample_randomness(c.topo, plan, rng);
        DecodeResult r = dec(enc(c, x, J, opt), rng);
        QuantumState want = reference_evaluate(c, x).reordered(r.state.regs().names());
        worst = std::max(worst, trace_distance(r.state, want));
        worst_ref = std::max(worst_ref, trace_distance(partial_trace(r.state, {"ref"}), partial_trace(want, {"ref"})));
    }
    return {make_check("correctness/joint-with-reference", worst, cfg.tol_exact,
                       fmt::format("{} random circuits, one sampled branch each, {} T gates", cfg.instances, t_gates)),
            make_check("correctness/reference-marginal", worst_ref, cfg.tol_exact)};
}

std::vector<Check> backend_checks(const Config& cfg) {
    const std::vector<std::pair<std::string, std::string>> circuits = {
        {"T", "qgc-circuit v1\ninputs 1\noutputs 1\ngate T in=in0 out=out0\n"},
        {"H-T", "qgc-circuit v1\ninputs 1\noutputs 1\ngate H in=in0 out=a\ngate T in=a out=out0\n"},
        {"CNOT", "qgc-circuit v1\ninputs 2\noutputs 2\ngate CNOT in=in0,in1 out=out0,out1\n"},
    };
    std::vector<Check> out;
    for (size_t ci = 0; ci < circuits.size(); ci++) {
        Rng rng(split_seed(cfg.seed, "backends", ci));
        Circuit c = parse_circuit(circuits[ci].second);
        RegisterMap regs;
        for (int i = 0; i < c.topo.n; i++) regs.add("in" + std::to_string(i), 1);
        QuantumState x = QuantumState::from_amplitudes(regs, random_amplitudes(size_t{1} << regs.total(), rng));
        CreParams cre = CreParams::with_segments(0);
        LabelPlan plan = plan_labels(c.topo, cre);
        RandomnessJ J = sample_randomness(c.topo, plan, rng);
        const int W = c.topo.num_wires();
        double worst = 0, total = 0;
        int label_mismatch = 0;
        for (uint64_t br = 0; br < (uint64_t{1} << (2 * W)); br++) {
            DecodeOptions d;
            d.choose = [br, W](int w) {
                uint64_t k = br >> (2 * (W - 1 - w));
                return std::make_pair(int((k >> 1) & 1), int(k & 1));
            };
            EncodeOptions eo;
            eo.cre = cre;
            eo.backend = Backend::kExplicit;
            Rng r1(br), r2(br);
            DecodeResult ex = dec(enc(c, x, J, eo), r1, d);
            eo.backend = Backend::kCompressed;
            DecodeResult co = dec(enc(c, x, J, eo), r2, d);
            worst = std::max({worst, std::abs(ex.prob - co.prob), trace_distance(ex.state, co.state)});
            label_mismatch += ex.label_log != co.label_log;
            total += co.prob;
        }
        out.push_back(make_check("backends/" + circuits[ci].first, worst, cfg.tol_exact,
                                 fmt::format("{} branches, kappa={}", uint64_t{1} << (2 * W), plan.max_kappa())));
        out.push_back(make_check("backends/" + circuits[ci].first + "/label-log", label_mismatch, 0));
        out.push_back(make_check("backends/" + circuits[ci].first + "/branch-mass", std::abs(total - 1.0), cfg.tol_exact));
    }
    return out;
}

std::vector<Check> residue_checks(const Config& cfg) {
    Rng rng(split_seed(cfg.seed, "residue", 0));
    // Same shape, different gates, inputs chosen so both give T H|0>.
    Circuit f = parse_circuit("qgc-circuit v1\ninputs 1\noutputs 1\ngate H in=in0 out=a\ngate T in=a out=out0\n");
    Circuit g = parse_circuit("qgc-circuit v1\ninputs 1\noutputs 1\ngate T in=in0 out=a\ngate H in=a out=out0\n");
    Circuit h = parse_circuit(
        "qgc-circuit v1\ninputs 1\noutputs 1\ngate X in=in0 out=a\ngate H in=a out=b\ngate T in=b out=out0\n");
    QuantumState yf = one_qubit({});
    QuantumState yg = one_qubit({gates::H(), gates::T(), gates::H(), gates::T()}, true);
    QuantumState yh = one_qubit({gates::X()});

    ResidueEstimate same = residue_distance(f, yf, g, yg, cfg.samples, rng);
    ResidueEstimate other = residue_distance(f, yf, h, yh, cfg.samples, rng);
    return {make_check("residue/same-topology", same.distance, cfg.tol_stat,
                       fmt::format("{} samples per circuit", cfg.samples)),
            make_floor_check("residue/different-topology", other.distance, 0.2, "negative control"),
            make_check("residue/outputs", std::max(same.output_error, other.output_error), cfg.tol_exact)};
}

std::vector<Check> gr_checks(const Config& cfg) {
    std::vector<Check> out;
    Rng rng(split_seed(cfg.seed, "gr", 0));
    Circuit c = parse_circuit("qgc-circuit v1\ninputs 1\noutputs 1\ngate H in=in0 out=a\ngate P in=a out=out0\n");
    QuantumState x = QuantumState::from_amplitudes(RegisterMap{{"in0", 1}}, random_amplitudes(2, rng));
    QuantumState y = reference_evaluate(c, x);
    std::map<std::string, int> real, fake;
    for (int k = 0; k < clifford1::kCount; k++) {
        real[gr_encode_with(c, x, clifford1::tableau(k)).residual.key()]++;
        fake[gr_sim_with(y, 1, clifford1::tableau(k)).residual.key()]++;
    }
    const bool uniform = real.size() == size_t(clifford1::kCount) &&
                         std::all_of(real.begin(), real.end(), [](const auto& kv) { return kv.second == 1; });
    out.push_back(make_check("gr/residual-multisets", (uniform && real == fake) ? 0.0 : 1.0, 0.0,
                             fmt::format("{} distinct residuals", real.size())));

    double worst = 0;
    for (int k = 0; k < 200; k++) {
        RandomCircuitOptions ro;
        ro.inputs = 3;
        ro.gates = 4;
        ro.clifford_only = true;
        Circuit rc = random_circuit(ro, rng);
        RegisterMap regs{{"in0", 1}, {"in1", 1}, {"in2", 1}};
        QuantumState in = QuantumState::from_amplitudes(regs, random_amplitudes(8, rng));
        worst = std::max(worst, trace_distance(gr_decode(gr_encode(rc, in, rng)), reference_evaluate(rc, in)));
    }
    out.push_back(make_check("gr/decode-n=3", worst, cfg.tol_unitary, "200 random Clifford circuits"));
    return out;
}

// ---------------------------------------------------------------- driver

std::vector<SuiteReport> run(const std::string& suite, const Config& cfg) {
    using Clock = std::chrono::steady_clock;
    std::vector<std::string> names;
    if (suite == "all") {
        names = suite_names();
    } else if (std::find(suite_names().begin(), suite_names().end(), suite) != suite_names().end()) {
        names = {suite};
    } else {
        throw Error("unknown suite '" + suite + "'");
    }
    std::vector<SuiteReport> out;
    for (const auto& n : names) {
        SuiteReport r;
        r.suite = n;
        auto t0 = Clock::now();
        auto add = [&r](std::vector<Check> v) { r.checks.insert(r.checks.end(), v.begin(), v.end()); };
        if (n == "identities") {
            add(identity_checks(cfg));
            add(teleport_checks(cfg));
        } else if (n == "twirl") {
            add(twirl_checks(cfg));
        } else if (n == "cre-privacy") {
            add(cre_privacy_checks(cfg));
        } else if (n == "correctness") {
            add(correctness_checks(cfg));
            add(backend_checks(cfg));
        } else if (n == "residue") {
            add(residue_checks(cfg));
        } else {
            add(gr_checks(cfg));
        }
        r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_report(const std::vector<SuiteReport>& reports, const Config& cfg) {
    std::ostringstream os;
    os << fmt::format("seed={} samples={} instances={} tol_exact={:g} tol_unitary={:g} tol_stat={:g}\n", cfg.seed,
                      cfg.samples, cfg.instances, cfg.tol_exact, cfg.tol_unitary, cfg.tol_stat);
    for (const auto& r : reports) {
        for (const auto& c : r.checks) {
            os << fmt::format("suite={} check={} value={:.6g} {}={:g} pass={}", r.suite, c.name, c.value,
                              c.at_least ? "floor" : "bound", c.bound, c.pass ? 1 : 0);
            if (!c.detail.empty()) os << " detail=\"" << c.detail << "\"";
            os << "\n";
        }
        size_t failed = std::count_if(r.checks.begin(), r.checks.end(), [](const Check& c) { return !c.pass; });
        os << fmt::format("suite={} pass={} checks={} failed={} seconds={:.2f}\n", r.suite, r.pass() ? 1 : 0,
                          r.checks.size(), failed, r.seconds);
    }
    return os.str();
}

}  // namespace qgc::verify
