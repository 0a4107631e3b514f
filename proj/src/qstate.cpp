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

#include "qgc/qstate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace qgc {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Applies a dense matrix to the qubits at the given bit positions of a
// vector with `nbits` index bits. pos[0] is the gate's most significant qubit.
void apply_kernel(std::vector<cd>& v, int nbits, const std::vector<int>& pos, const GateMatrix& g, bool conj) {
    const size_t n = size_t{1} << nbits;
    const int k = int(pos.size());
    auto m = [&](size_t r, size_t c) { return conj ? std::conj(g.at(r, c)) : g.at(r, c); };
    if (k == 1) {
        const size_t stride = size_t{1} << pos[0];
        const cd m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
        for (size_t i0 = 0; i0 < n; i0 += 2 * stride) {
            for (size_t i = i0; i < i0 + stride; i++) {
                cd a = v[i], b = v[i + stride];
                v[i] = m00 * a + m01 * b;
                v[i + stride] = m10 * a + m11 * b;
            }
        }
        return;
    }
    const size_t d = size_t{1} << k;
    std::vector<size_t> offs(d, 0);
    size_t mask = 0;
    for (int t = 0; t < k; t++) mask |= size_t{1} << pos[t];
    for (size_t j = 0; j < d; j++) {
        size_t o = 0;
        for (int t = 0; t < k; t++) {
            if ((j >> (k - 1 - t)) & 1) o |= size_t{1} << pos[t];
        }
        offs[j] = o;
    }
    std::vector<cd> in(d), out(d);
    std::vector<cd> mat(d * d);
    for (size_t r = 0; r < d; r++) {
        for (size_t c = 0; c < d; c++) mat[r * d + c] = m(r, c);
    }
    for (size_t base = 0; base < n; base++) {
        if (base & mask) continue;
        for (size_t j = 0; j < d; j++) in[j] = v[base | offs[j]];
        for (size_t r = 0; r < d; r++) {
            cd acc = 0;
            for (size_t c = 0; c < d; c++) acc += mat[r * d + c] * in[c];
            out[r] = acc;
        }
        for (size_t j = 0; j < d; j++) v[base | offs[j]] = out[j];
    }
}

// Bit-flip permutation: fan-out (flip all targets if control set) or parity
// (flip target if xor of controls set).
void perm_kernel(std::vector<cd>& v, int nbits, const std::vector<int>& ctrl_pos, const std::vector<int>& tgt_pos,
                 bool parity_mode) {
    const size_t n = size_t{1} << nbits;
    size_t cmask = 0, tmask = 0;
    for (int p : ctrl_pos) cmask |= size_t{1} << p;
    for (int p : tgt_pos) tmask |= size_t{1} << p;
    if (tmask == 0) return;
    const size_t t0 = size_t{1} << tgt_pos[0];
    for (size_t i = 0; i < n; i++) {
        if (i & t0) continue;
        bool fire = parity_mode ? (std::popcount(i & cmask) & 1) : ((i & cmask) == cmask);
        if (fire) std::swap(v[i], v[i ^ tmask]);
    }
}

size_t gather_bits(size_t idx, const std::vector<int>& pos) {
    size_t r = 0;
    for (int p : pos) r = (r << 1) | ((idx >> p) & 1);
    return r;
}

}  // namespace

// ---------------------------------------------------------------- RegisterMap

RegisterMap::RegisterMap(std::initializer_list<std::pair<std::string, int>> entries) {
    for (const auto& [n, w] : entries) add(n, w);
}

void RegisterMap::add(const std::string& name, int width) {
    if (width < 1) throw Error("register width must be >= 1: " + name);
    if (has(name)) throw Error("duplicate register name: " + name);
    entries_.emplace_back(name, width);
    total_ += width;
}

bool RegisterMap::has(const std::string& name) const {
    for (const auto& e : entries_) {
        if (e.first == name) return true;
    }
    return false;
}

int RegisterMap::width(const std::string& name) const {
    for (const auto& e : entries_) {
        if (e.first == name) return e.second;
    }
    throw Error("unknown register: " + name);
}

int RegisterMap::start(const std::string& name) const {
    int s = 0;
    for (const auto& e : entries_) {
        if (e.first == name) return s;
        s += e.second;
    }
    throw Error("unknown register: " + name);
}

int RegisterMap::flat(const QubitAddr& a) const {
    int s = start(a.reg);
    if (a.offset < 0 || a.offset >= width(a.reg)) {
        throw Error("qubit offset out of range: " + a.reg + "[" + std::to_string(a.offset) + "]");
    }
    return s + a.offset;
}

std::vector<std::string> RegisterMap::names() const {
    std::vector<std::string> r;
    for (const auto& e : entries_) r.push_back(e.first);
    return r;
}

std::string RegisterMap::describe() const {
    std::string s;
    for (const auto& [n, w] : entries_) {
        if (!s.empty()) s += ",";
        s += n + ":" + std::to_string(w);
    }
    return s;
}

// ---------------------------------------------------------------- GateMatrix

GateMatrix GateMatrix::from_rows(int arity, std::vector<cd> entries) {
    GateMatrix g;
    g.arity = arity;
    if (entries.size() != (size_t{1} << (2 * arity))) throw Error("gate matrix size mismatch");
    g.m = std::move(entries);
    return g;
}

GateMatrix GateMatrix::adjoint() const {
    GateMatrix r = *this;
    size_t d = dim();
    for (size_t i = 0; i < d; i++) {
        for (size_t j = 0; j < d; j++) r.m[i * d + j] = std::conj(m[j * d + i]);
    }
    return r;
}

GateMatrix GateMatrix::operator*(const GateMatrix& o) const {
    if (o.arity != arity) throw Error("gate arity mismatch in product");
    size_t d = dim();
    GateMatrix r;
    r.arity = arity;
    r.m.assign(d * d, 0);
    for (size_t i = 0; i < d; i++) {
        for (size_t k = 0; k < d; k++) {
            cd a = m[i * d + k];
            if (a == cd(0)) continue;
            for (size_t j = 0; j < d; j++) r.m[i * d + j] += a * o.m[k * d + j];
        }
    }
    return r;
}

GateMatrix GateMatrix::kron(const GateMatrix& o) const {
    GateMatrix r;
    r.arity = arity + o.arity;
    size_t da = dim(), db = o.dim(), d = da * db;
    r.m.assign(d * d, 0);
    for (size_t i = 0; i < da; i++) {
        for (size_t j = 0; j < da; j++) {
            for (size_t k = 0; k < db; k++) {
                for (size_t l = 0; l < db; l++) r.m[(i * db + k) * d + (j * db + l)] = m[i * da + j] * o.m[k * db + l];
            }
        }
    }
    return r;
}

bool GateMatrix::is_unitary(double tol) const {
    GateMatrix p = adjoint() * *this;
    size_t d = dim();
    for (size_t i = 0; i < d; i++) {
        for (size_t j = 0; j < d; j++) {
            if (std::abs(p.m[i * d + j] - cd(i == j ? 1.0 : 0.0)) > tol) return false;
        }
    }
    return true;
}

double GateMatrix::phase_distance(const GateMatrix& o) const {
    if (o.arity != arity) return 1e300;
    cd ip = 0;
    for (size_t i = 0; i < m.size(); i++) ip += std::conj(o.m[i]) * m[i];
    cd ph = std::abs(ip) > 0 ? ip / std::abs(ip) : cd(1);
    double worst = 0;
    for (size_t i = 0; i < m.size(); i++) worst = std::max(worst, std::abs(m[i] - ph * o.m[i]));
    return worst;
}

namespace gates {
GateMatrix I() { return GateMatrix::from_rows(1, {1, 0, 0, 1}); }
GateMatrix X() { return GateMatrix::from_rows(1, {0, 1, 1, 0}); }
GateMatrix Y() { return GateMatrix::from_rows(1, {0, cd(0, 1), cd(0, -1), 0}); }
GateMatrix Z() { return GateMatrix::from_rows(1, {1, 0, 0, -1}); }
GateMatrix H() { return GateMatrix::from_rows(1, {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2}); }
GateMatrix P() { return GateMatrix::from_rows(1, {1, 0, 0, cd(0, 1)}); }
GateMatrix T() { return GateMatrix::from_rows(1, {1, 0, 0, std::polar(1.0, M_PI / 4)}); }
GateMatrix CNOT() { return GateMatrix::from_rows(2, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0}); }
GateMatrix CZ() { return GateMatrix::from_rows(2, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1}); }
GateMatrix SWAP() { return GateMatrix::from_rows(2, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1}); }
}  // namespace gates

// ---------------------------------------------------------------- QuantumState

QuantumState QuantumState::zeros(const RegisterMap& regs) {
    QuantumState s;
    s.regs_ = regs;
    s.check_caps();
    s.data_.assign(s.dim(), 0);
    s.data_[0] = 1;
    return s;
}

QuantumState QuantumState::from_amplitudes(const RegisterMap& regs, std::vector<cd> amps) {
    QuantumState s;
    s.regs_ = regs;
    s.check_caps();
    if (amps.size() != s.dim()) throw Error("amplitude count does not match register widths");
    s.data_ = std::move(amps);
    return s;
}

QuantumState QuantumState::from_density(const RegisterMap& regs, std::vector<cd> rho) {
    QuantumState s;
    s.regs_ = regs;
    s.pure_ = false;
    s.check_caps();
    if (rho.size() != s.dim() * s.dim()) throw Error("density size does not match register widths");
    s.data_ = std::move(rho);
    return s;
}

void QuantumState::check_caps() const {
    int n = regs_.total();
    int cap = pure_ ? Tolerances::kPureQubitCap : Tolerances::kDensityQubitCap;
    if (n > cap) {
        throw BudgetError("qubit cap exceeded: requested " + std::to_string(n) + " qubits in " +
                          (pure_ ? "pure" : "density") + " form, cap " + std::to_string(cap));
    }
}

std::vector<int> QuantumState::flat_targets(const std::vector<QubitAddr>& targets) const {
    std::vector<int> f;
    std::set<int> seen;
    for (const auto& a : targets) {
        int q = regs_.flat(a);
        if (!seen.insert(q).second) throw Error("duplicate target qubit: " + a.reg);
        f.push_back(q);
    }
    return f;
}

void QuantumState::apply(const GateMatrix& g, const std::vector<QubitAddr>& targets) {
    apply_flat(g, flat_targets(targets));
}

void QuantumState::apply_flat(const GateMatrix& g, const std::vector<int>& flat) {
    if (int(flat.size()) != g.arity) throw Error("gate arity does not match target count");
    int n = num_qubits();
    if (pure_) {
        std::vector<int> pos;
        for (int q : flat) pos.push_back(n - 1 - q);
        apply_kernel(data_, n, pos, g, false);
    } else {
        std::vector<int> rpos, cpos;
        for (int q : flat) {
            rpos.push_back(2 * n - 1 - q);
            cpos.push_back(n - 1 - q);
        }
        apply_kernel(data_, 2 * n, rpos, g, false);
        apply_kernel(data_, 2 * n, cpos, g, true);
    }
}

void QuantumState::permute_flip(const std::vector<int>& fc, const std::vector<int>& ft, bool parity_mode) {
    int n = num_qubits();
    auto to_pos = [&](const std::vector<int>& f, int shift) {
        std::vector<int> p;
        for (int q : f) p.push_back(n - 1 - q + shift);
        return p;
    };
    if (pure_) {
        perm_kernel(data_, n, to_pos(fc, 0), to_pos(ft, 0), parity_mode);
    } else {
        perm_kernel(data_, 2 * n, to_pos(fc, n), to_pos(ft, n), parity_mode);
        perm_kernel(data_, 2 * n, to_pos(fc, 0), to_pos(ft, 0), parity_mode);
    }
}

void QuantumState::fanout(const QubitAddr& control, const std::vector<QubitAddr>& targets) {
    std::vector<QubitAddr> all = targets;
    all.insert(all.begin(), control);
    auto f = flat_targets(all);
    permute_flip({f[0]}, std::vector<int>(f.begin() + 1, f.end()), false);
}

void QuantumState::parity(const QubitAddr& target, const std::vector<QubitAddr>& controls) {
    std::vector<QubitAddr> all = controls;
    all.insert(all.begin(), target);
    auto f = flat_targets(all);
    permute_flip(std::vector<int>(f.begin() + 1, f.end()), {f[0]}, true);
}

MeasureResult QuantumState::measure(const std::vector<QubitAddr>& targets, Rng* rng, const Bits* forced) {
    auto f = flat_targets(targets);
    int n = num_qubits();
    std::vector<int> pos;
    for (int q : f) pos.push_back(n - 1 - q);
    size_t d = dim();
    auto weight = [&](size_t i) { return pure_ ? std::norm(data_[i]) : data_[i * d + i].real(); };

    size_t outcome = 0;
    if (forced) {
        if (forced->size() != f.size()) throw Error("forced outcome length mismatch");
        for (size_t t = 0; t < f.size(); t++) outcome = (outcome << 1) | size_t(forced->get(t));
    } else {
        if (!rng) throw Error("measure needs an rng or a forced outcome");
        double r = rng->uniform(), acc = 0;
        size_t pick = d - 1;
        for (size_t i = 0; i < d; i++) {
            acc += weight(i);
            if (acc > r) {
                pick = i;
                break;
            }
        }
        // Guard against landing on a zero-weight tail entry through rounding.
        while (weight(pick) <= 0 && pick > 0) pick--;
        outcome = gather_bits(pick, pos);
    }
    double prob = 0;
    for (size_t i = 0; i < d; i++) {
        if (gather_bits(i, pos) == outcome) prob += weight(i);
    }
    if (prob < 1e-14) {
        if (forced) throw Error("zero-probability branch requested in deterministic-replay mode");
        throw Error("measurement sampled a zero-probability outcome");
    }
    if (pure_) {
        double sc = 1.0 / std::sqrt(prob);
        for (size_t i = 0; i < d; i++) data_[i] = gather_bits(i, pos) == outcome ? data_[i] * sc : cd(0);
    } else {
        for (size_t r = 0; r < d; r++) {
            bool rk = gather_bits(r, pos) == outcome;
            for (size_t c = 0; c < d; c++) {
                bool ck = gather_bits(c, pos) == outcome;
                data_[r * d + c] = (rk && ck) ? data_[r * d + c] / prob : cd(0);
            }
        }
    }
    MeasureResult res;
    res.outcome = Bits::from_uint(outcome, int(f.size()));
    res.prob = prob;
    return res;
}

MeasureResult QuantumState::measure_and_remove(const std::vector<std::string>& regs, Rng* rng, const Bits* forced) {
    std::vector<QubitAddr> targets;
    std::set<std::string> gone(regs.begin(), regs.end());
    for (const auto& r : regs) {
        for (int k = 0; k < regs_.width(r); k++) targets.push_back({r, k});
    }
    MeasureResult res = measure(targets, rng, forced);
    int n = num_qubits();
    std::vector<int> keep_pos;
    RegisterMap kept;
    for (const auto& [name, w] : regs_.entries()) {
        if (gone.count(name)) continue;
        kept.add(name, w);
        int s = regs_.start(name);
        for (int k = 0; k < w; k++) keep_pos.push_back(n - 1 - (s + k));
    }
    std::vector<int> tpos;
    for (const auto& a : targets) tpos.push_back(n - 1 - regs_.flat(a));
    size_t want = 0;
    for (size_t t = 0; t < targets.size(); t++) want = (want << 1) | size_t(res.outcome.get(t));
    size_t d = dim();
    size_t nd = size_t{1} << kept.total();
    std::vector<cd> nd_data(pure_ ? nd : nd * nd, 0);
    if (pure_) {
        for (size_t i = 0; i < d; i++) {
            if (gather_bits(i, tpos) == want) nd_data[gather_bits(i, keep_pos)] = data_[i];
        }
    } else {
        std::vector<size_t> rows;
        for (size_t i = 0; i < d; i++) {
            if (gather_bits(i, tpos) == want) rows.push_back(i);
        }
        for (size_t r : rows) {
            size_t kr = gather_bits(r, keep_pos);
            for (size_t c : rows) nd_data[kr * nd + gather_bits(c, keep_pos)] = data_[r * d + c];
        }
    }
    regs_ = kept;
    data_ = std::move(nd_data);
    return res;
}

void QuantumState::add_zeros(const std::string& name, int width) {
    RegisterMap nr = regs_;
    nr.add(name, width);
    QuantumState probe;
    probe.regs_ = nr;
    probe.pure_ = pure_;
    probe.check_caps();
    size_t d = dim();
    size_t nd = d << width;
    if (pure_) {
        std::vector<cd> v(nd, 0);
        for (size_t i = 0; i < d; i++) v[i << width] = data_[i];
        data_ = std::move(v);
    } else {
        std::vector<cd> v(nd * nd, 0);
        for (size_t r = 0; r < d; r++) {
            for (size_t c = 0; c < d; c++) v[(r << width) * nd + (c << width)] = data_[r * d + c];
        }
        data_ = std::move(v);
    }
    regs_ = nr;
}

void QuantumState::add_epr(const std::string& a, const std::string& b) {
    add_zeros(a, 1);
    add_zeros(b, 1);
    apply(gates::H(), {{a, 0}});
    apply(gates::CNOT(), {{a, 0}, {b, 0}});
}

void QuantumState::rename(const std::string& from, const std::string& to) {
    if (from == to) return;
    if (regs_.has(to)) throw Error("rename target exists: " + to);
    RegisterMap nr;
    for (const auto& [n, w] : regs_.entries()) nr.add(n == from ? to : n, w);
    if (!regs_.has(from)) throw Error("unknown register: " + from);
    regs_ = nr;
}

QuantumState QuantumState::reordered(const std::vector<std::string>& order) const {
    if (order.size() != regs_.size()) throw Error("reorder must list every register");
    RegisterMap nr;
    std::vector<int> src_pos;  // for each new flat qubit, its old bit position
    int n = num_qubits();
    for (const auto& name : order) {
        int w = regs_.width(name);
        nr.add(name, w);
        int s = regs_.start(name);
        for (int k = 0; k < w; k++) src_pos.push_back(n - 1 - (s + k));
    }
    QuantumState out;
    out.regs_ = nr;
    out.pure_ = pure_;
    size_t d = dim();
    std::vector<size_t> map(d);
    for (size_t i = 0; i < d; i++) map[i] = gather_bits(i, src_pos);
    if (pure_) {
        out.data_.assign(d, 0);
        for (size_t i = 0; i < d; i++) out.data_[map[i]] = data_[i];
    } else {
        out.data_.assign(d * d, 0);
        for (size_t r = 0; r < d; r++) {
            for (size_t c = 0; c < d; c++) out.data_[map[r] * d + map[c]] = data_[r * d + c];
        }
    }
    return out;
}

QuantumState QuantumState::to_density() const {
    if (!pure_) return *this;
    QuantumState out;
    out.regs_ = regs_;
    out.pure_ = false;
    out.check_caps();
    size_t d = dim();
    out.data_.assign(d * d, 0);
    for (size_t r = 0; r < d; r++) {
        if (data_[r] == cd(0)) continue;
        for (size_t c = 0; c < d; c++) out.data_[r * d + c] = data_[r] * std::conj(data_[c]);
    }
    return out;
}

double QuantumState::norm() const {
    if (pure_) {
        double s = 0;
        for (const auto& a : data_) s += std::norm(a);
        return std::sqrt(s);
    }
    double t = 0;
    for (size_t i = 0; i < dim(); i++) t += data_[i * dim() + i].real();
    return t;
}

void QuantumState::validate() const {
    if (pure_) {
        if (std::abs(norm() - 1.0) > Tolerances::kNorm) throw Error("pure state is not normalized");
        return;
    }
    size_t d = dim();
    for (size_t r = 0; r < d; r++) {
        for (size_t c = 0; c < d; c++) {
            if (std::abs(data_[r * d + c] - std::conj(data_[c * d + r])) > Tolerances::kNorm) {
                throw Error("density operator is not Hermitian");
            }
        }
    }
    if (std::abs(norm() - 1.0) > Tolerances::kNorm) throw Error("density operator trace is not 1");
    Eigen::MatrixXcd m(d, d);
    for (size_t r = 0; r < d; r++) {
        for (size_t c = 0; c < d; c++) m(r, c) = data_[r * d + c];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < Tolerances::kPsdFloor) throw Error("density operator is not PSD");
}

// ---------------------------------------------------------------- free functions

QuantumState make_state(const RegisterMap& regs, const std::vector<RegisterInit>& inits) {
    std::map<std::string, const RegisterInit*> by_name;
    for (const auto& in : inits) {
        if (!by_name.emplace(in.name, &in).second) throw Error("register initialized twice: " + in.name);
        if (in.kind == RegisterInit::Kind::kEpr) {
            if (!by_name.emplace(in.partner, &in).second) throw Error("register initialized twice: " + in.partner);
            if (regs.width(in.name) != 1 || regs.width(in.partner) != 1) {
                throw Error("epr initializer needs 1-qubit registers");
            }
        }
    }
    for (const auto& name : regs.names()) {
        if (!by_name.count(name)) throw Error("register has no initializer: " + name);
    }
    // Build in an order that keeps EPR partners adjacent, then reorder.
    QuantumState s = QuantumState::zeros(RegisterMap{});
    std::set<std::string> done;
    for (const auto& name : regs.names()) {
        if (done.count(name)) continue;
        const RegisterInit& in = *by_name.at(name);
        int w = regs.width(name);
        switch (in.kind) {
            case RegisterInit::Kind::kZeros:
                s.add_zeros(name, w);
                done.insert(name);
                break;
            case RegisterInit::Kind::kEpr:
                s.add_epr(in.name, in.partner);
                done.insert(in.name);
                done.insert(in.partner);
                break;
            case RegisterInit::Kind::kAmplitudes: {
                if (in.amplitudes.size() != (size_t{1} << w)) throw Error("width mismatch for register " + name);
                RegisterMap one;
                one.add(name, w);
                auto piece = QuantumState::from_amplitudes(one, in.amplitudes);
                double nn = piece.norm();
                if (nn == 0) throw Error("zero amplitude vector for register " + name);
                std::vector<cd> a = in.amplitudes;
                for (auto& x : a) x /= nn;
                s = tensor(s, QuantumState::from_amplitudes(one, a));
                done.insert(name);
                break;
            }
        }
    }
    return s.reordered(regs.names());
}

QuantumState apply_unitary(QuantumState s, const GateMatrix& g, const std::vector<QubitAddr>& targets) {
    s.apply(g, targets);
    return s;
}

std::pair<MeasureResult, QuantumState> measure(QuantumState s, const std::vector<QubitAddr>& targets, Rng* rng,
                                               const Bits* forced) {
    MeasureResult r = s.measure(targets, rng, forced);
    return {r, std::move(s)};
}

QuantumState partial_trace(const QuantumState& s, const std::vector<std::string>& keep) {
    if (keep.empty()) throw Error("partial_trace needs at least one kept register");
    const RegisterMap& regs = s.regs();
    int n = regs.total();
    std::set<std::string> keep_set(keep.begin(), keep.end());
    RegisterMap kept;
    std::vector<int> kpos, tpos;
    for (const auto& name : keep) {
        int w = regs.width(name);
        kept.add(name, w);
        int st = regs.start(name);
        for (int k = 0; k < w; k++) kpos.push_back(n - 1 - (st + k));
    }
    for (const auto& [name, w] : regs.entries()) {
        if (keep_set.count(name)) continue;
        int st = regs.start(name);
        for (int k = 0; k < w; k++) tpos.push_back(n - 1 - (st + k));
    }
    size_t dk = size_t{1} << kept.total();
    size_t dt = size_t{1} << (n - kept.total());
    size_t d = s.dim();
    std::vector<size_t> ki(d), ti(d);
    for (size_t i = 0; i < d; i++) {
        ki[i] = gather_bits(i, kpos);
        ti[i] = gather_bits(i, tpos);
    }
    std::vector<cd> rho(dk * dk, 0);
    if (s.is_pure()) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dk, dt);
        for (size_t i = 0; i < d; i++) m(ki[i], ti[i]) = s.amplitude(i);
        Eigen::MatrixXcd r = m * m.adjoint();
        for (size_t a = 0; a < dk; a++) {
            for (size_t b = 0; b < dk; b++) rho[a * dk + b] = r(a, b);
        }
    } else {
        // Group indices by traced part.
        std::vector<std::vector<size_t>> by_t(dt);
        for (size_t i = 0; i < d; i++) by_t[ti[i]].push_back(i);
        for (const auto& grp : by_t) {
            for (size_t r : grp) {
                for (size_t c : grp) rho[ki[r] * dk + ki[c]] += s.rho(r, c);
            }
        }
    }
    return QuantumState::from_density(kept, std::move(rho));
}

double trace_distance(const QuantumState& a, const QuantumState& b) {
    if (a.regs() != b.regs()) {
        throw Error("trace_distance: register maps differ (" + a.regs().describe() + " vs " + b.regs().describe() + ")");
    }
    if (a.is_pure() && b.is_pure()) {
        // sqrt(1 - |<a|b>|^2), computed from the phase-aligned difference so
        // that nearly equal states do not lose half their digits.
        cd ip = 0;
        for (size_t i = 0; i < a.dim(); i++) ip += std::conj(a.amplitude(i)) * b.amplitude(i);
        double mag = std::abs(ip);
        cd align = mag > 0 ? std::conj(ip) / mag : cd(1);
        double diff2 = 0;
        for (size_t i = 0; i < a.dim(); i++) diff2 += std::norm(a.amplitude(i) - align * b.amplitude(i));
        double one_minus = 0.5 * diff2 * (1.0 + mag);
        return std::min(1.0, std::sqrt(std::max(0.0, one_minus)));
    }
    QuantumState da = a.to_density(), db = b.to_density();
    size_t d = a.dim();
    Eigen::MatrixXcd m(d, d);
    for (size_t r = 0; r < d; r++) {
        for (size_t c = 0; c < d; c++) m(r, c) = da.rho(r, c) - db.rho(r, c);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return std::min(1.0, 0.5 * es.eigenvalues().cwiseAbs().sum());
}

double fidelity(const QuantumState& a, const QuantumState& b) {
    if (a.regs() != b.regs()) throw Error("fidelity: register maps differ");
    if (a.is_pure() && b.is_pure()) {
        cd ip = 0;
        for (size_t i = 0; i < a.dim(); i++) ip += std::conj(a.amplitude(i)) * b.amplitude(i);
        return std::norm(ip);
    }
    if (a.is_pure() || b.is_pure()) {
        const QuantumState& p = a.is_pure() ? a : b;
        const QuantumState& r = a.is_pure() ? b : a;
        cd acc = 0;
        size_t d = a.dim();
        for (size_t i = 0; i < d; i++) {
            for (size_t j = 0; j < d; j++) acc += std::conj(p.amplitude(i)) * r.rho(i, j) * p.amplitude(j);
        }
        return acc.real();
    }
    throw Error("fidelity between two mixed states is not implemented");
}

QuantumState tensor(const QuantumState& a, const QuantumState& b) {
    RegisterMap regs = a.regs();
    for (const auto& [n, w] : b.regs().entries()) regs.add(n, w);
    size_t da = a.dim(), db = b.dim();
    if (a.is_pure() && b.is_pure()) {
        std::vector<cd> v(da * db);
        for (size_t i = 0; i < da; i++) {
            for (size_t j = 0; j < db; j++) v[i * db + j] = a.amplitude(i) * b.amplitude(j);
        }
        return QuantumState::from_amplitudes(regs, std::move(v));
    }
    QuantumState ra = a.to_density(), rb = b.to_density();
    size_t d = da * db;
    std::vector<cd> v(d * d);
    for (size_t i = 0; i < da; i++) {
        for (size_t j = 0; j < da; j++) {
            for (size_t k = 0; k < db; k++) {
                for (size_t l = 0; l < db; l++) v[(i * db + k) * d + (j * db + l)] = ra.rho(i, j) * rb.rho(k, l);
            }
        }
    }
    return QuantumState::from_density(regs, std::move(v));
}

QuantumState mixture(const std::vector<std::pair<double, QuantumState>>& parts) {
    if (parts.empty()) throw Error("mixture of nothing");
    QuantumState first = parts[0].second.to_density();
    std::vector<cd> acc(first.data().size(), 0);
    for (const auto& [w, s] : parts) {
        if (s.regs() != first.regs()) throw Error("mixture: register maps differ");
        QuantumState d = s.to_density();
        for (size_t i = 0; i < acc.size(); i++) acc[i] += w * d.data()[i];
    }
    return QuantumState::from_density(first.regs(), std::move(acc));
}

std::string dump_state(const QuantumState& s) {
    std::ostringstream os;
    os << "qstate v1 " << (s.is_pure() ? "pure" : "density") << " " << s.regs().describe() << "\n";
    int n = s.num_qubits();
    size_t d = s.dim();
    char buf[64];
    for (size_t i = 0; i < d; i++) {
        for (int q = 0; q < n; q++) os << (((i >> (n - 1 - q)) & 1) ? '1' : '0');
        if (n == 0) os << "-";
        size_t cols = s.is_pure() ? 1 : d;
        for (size_t c = 0; c < cols; c++) {
            cd v = s.is_pure() ? s.amplitude(i) : s.rho(i, c);
            std::snprintf(buf, sizeof buf, " %.17g %.17g", v.real(), v.imag());
            os << buf;
        }
        os << "\n";
    }
    return os.str();
}

QuantumState parse_state(const std::string& text) {
    std::istringstream is(text);
    std::string magic, ver, kind, regdesc;
    if (!(is >> magic >> ver >> kind) || magic != "qstate" || ver != "v1") throw ParseError("not a qstate v1 dump");
    std::string rest;
    std::getline(is, rest);
    std::istringstream rs(rest);
    rs >> regdesc;
    RegisterMap regs;
    if (!regdesc.empty()) {
        std::stringstream ss(regdesc);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto colon = item.rfind(':');
            if (colon == std::string::npos) throw ParseError("bad register entry: " + item);
            regs.add(item.substr(0, colon), std::stoi(item.substr(colon + 1)));
        }
    }
    bool pure = kind == "pure";
    if (!pure && kind != "density") throw ParseError("unknown state kind: " + kind);
    size_t d = size_t{1} << regs.total();
    size_t cols = pure ? 1 : d;
    std::vector<cd> data(d * cols);
    for (size_t i = 0; i < d; i++) {
        std::string label;
        if (!(is >> label)) throw ParseError("truncated state dump");
        for (size_t c = 0; c < cols; c++) {
            double re, im;
            if (!(is >> re >> im)) throw ParseError("truncated state dump");
            data[i * cols + c] = cd(re, im);
        }
    }
    return pure ? QuantumState::from_amplitudes(regs, std::move(data))
                : QuantumState::from_density(regs, std::move(data));
}

}  // namespace qgc
