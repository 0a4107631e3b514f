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

#include "qgc/groups.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <sstream>

namespace qgc {

namespace {

int mod4(int v) { return ((v % 4) + 4) % 4; }

cd ipow(int c) {
    switch (mod4(c)) {
        case 0:
            return {1, 0};
        case 1:
            return {0, 1};
        case 2:
            return {-1, 0};
        default:
            return {0, -1};
    }
}

GateMatrix identity_matrix(int n) {
    size_t d = size_t{1} << n;
    std::vector<cd> m(d * d, 0);
    for (size_t i = 0; i < d; i++) m[i * d + i] = 1;
    return GateMatrix::from_rows(n, std::move(m));
}

// Matrix of a sequence of (gate, flat qubits) on n qubits, in time order.
GateMatrix circuit_matrix(int n, const std::vector<std::pair<GateMatrix, std::vector<int>>>& ops) {
    size_t d = size_t{1} << n;
    RegisterMap regs;
    if (n > 0) regs.add("q", n);
    std::vector<cd> out(d * d, 0);
    for (size_t col = 0; col < d; col++) {
        std::vector<cd> v(d, 0);
        v[col] = 1;
        QuantumState s = QuantumState::from_amplitudes(regs, v);
        for (const auto& [g, q] : ops) s.apply_flat(g, q);
        for (size_t r = 0; r < d; r++) out[r * d + col] = s.amplitude(r);
    }
    return GateMatrix::from_rows(n, std::move(out));
}

// Symplectic product of two Paulis (1 when they anticommute).
int symp(const Pauli& a, const Pauli& b) { return std::popcount((a.x & b.z) ^ (a.z & b.x)) & 1; }

}  // namespace

// ---------------------------------------------------------------- PX

PXElement PXElement::make(int c, int a, int b) { return {mod4(c), a & 1, mod4(b)}; }

GateMatrix PXElement::matrix() const {
    GateMatrix m = identity_matrix(1);
    if (a) m = gates::X();
    GateMatrix p = identity_matrix(1);
    for (int k = 0; k < b; k++) p = p * gates::P();
    m = m * p;
    for (auto& e : m.m) e *= ipow(c);
    return m;
}

PXElement PXElement::operator*(const PXElement& o) const {
    // X^a1 P^b1 X^a2 P^b2 with P^b X = i^b X P^{3b}.
    if (o.a == 0) return make(c + o.c, a, b + o.b);
    return make(c + o.c + b, a ^ 1, 3 * b + o.b);
}

PXElement PXElement::inverse() const {
    // (i^c X^a P^b)^-1 = i^-c P^-b X^a
    PXElement pinv = make(-c, 0, -b);
    PXElement xa = make(0, a, 0);
    return pinv * xa;
}

std::string PXElement::str() const {
    std::ostringstream os;
    os << "i^" << c << " X^" << a << " P^" << b;
    return os.str();
}

PXElement px_normalize(const std::vector<std::string>& seq) {
    PXElement acc;
    for (const auto& g : seq) {
        PXElement e;
        if (g == "I") {
            e = {};
        } else if (g == "X") {
            e = PXElement::make(0, 1, 0);
        } else if (g == "Z") {
            e = PXElement::make(0, 0, 2);
        } else if (g == "P") {
            e = PXElement::make(0, 0, 1);
        } else {
            throw Error("px_normalize: gate outside {I,X,Z,P}: " + g);
        }
        acc = acc * e;
    }
    return acc;
}

// ---------------------------------------------------------------- Pauli

Pauli Pauli::hermitian(uint32_t x, uint32_t z, bool sign) {
    return {x, z, uint8_t(mod4(2 * int(sign) + std::popcount(x & z)))};
}

Pauli Pauli::operator*(const Pauli& o) const {
    return {x ^ o.x, z ^ o.z, uint8_t(mod4(int(phase) + int(o.phase) + 2 * std::popcount(z & o.x)))};
}

bool Pauli::commutes(const Pauli& o) const { return symp(*this, o) == 0; }

bool Pauli::is_hermitian() const { return (mod4(int(phase) - std::popcount(x & z)) & 1) == 0; }

bool Pauli::sign() const { return mod4(int(phase) - std::popcount(x & z)) == 2; }

GateMatrix Pauli::matrix(int n) const {
    GateMatrix m = identity_matrix(0);
    m = GateMatrix::from_rows(0, {1});
    for (int q = 0; q < n; q++) {
        GateMatrix f = identity_matrix(1);
        if ((x >> q) & 1) f = gates::X();
        if ((z >> q) & 1) f = f * gates::Z();
        m = m.kron(f);
    }
    for (auto& e : m.m) e *= ipow(phase);
    return m;
}

std::string Pauli::str(int n) const {
    std::string s;
    if (is_hermitian()) {
        s = sign() ? "-" : "+";
        for (int q = 0; q < n; q++) {
            int xb = (x >> q) & 1, zb = (z >> q) & 1;
            s += xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : '_');
        }
        return s;
    }
    s = "i^" + std::to_string(phase) + " ";
    for (int q = 0; q < n; q++) {
        int xb = (x >> q) & 1, zb = (z >> q) & 1;
        s += xb ? (zb ? "(XZ)" : "X") : (zb ? "Z" : "_");
    }
    return s;
}

// ---------------------------------------------------------------- Tableau

Tableau::Tableau(int n) : n_(n) {
    if (n < 0 || n > kMaxQubits) throw Error("tableau width out of range");
    for (int i = 0; i < n; i++) {
        img_[2 * i] = Pauli::x_on(i);
        img_[2 * i + 1] = Pauli::z_on(i);
    }
}

Pauli Tableau::conjugate(const Pauli& p) const {
    Pauli r{0, 0, p.phase};
    for (int j = 0; j < n_; j++) {
        if ((p.x >> j) & 1) r = r * img_[2 * j];
    }
    for (int j = 0; j < n_; j++) {
        if ((p.z >> j) & 1) r = r * img_[2 * j + 1];
    }
    return r;
}

Tableau operator*(const Tableau& a, const Tableau& b) {
    if (a.n_ != b.n_) throw Error("tableau width mismatch");
    Tableau r(a.n_);
    for (int k = 0; k < 2 * a.n_; k++) r.img_[k] = a.conjugate(b.img_[k]);
    return r;
}

Tableau Tableau::inverse() const {
    Tableau r(n_);
    for (int j = 0; j < n_; j++) {
        for (int which = 0; which < 2; which++) {
            Pauli target = which == 0 ? Pauli::x_on(j) : Pauli::z_on(j);
            Pauli q;
            for (int i = 0; i < n_; i++) {
                if (symp(target, img_[2 * i + 1])) q.x |= uint32_t{1} << i;
                if (symp(target, img_[2 * i])) q.z |= uint32_t{1} << i;
            }
            q = Pauli::hermitian(q.x, q.z, false);
            if (conjugate(q).sign()) q = Pauli::hermitian(q.x, q.z, true);
            r.img_[2 * j + which] = q;
        }
    }
    return r;
}

bool Tableau::is_valid() const {
    for (int k = 0; k < 2 * n_; k++) {
        const Pauli& p = img_[k];
        if (!p.is_hermitian()) return false;
        if ((p.x | p.z) >> n_) return false;
        if (p.is_identity_mod_phase()) return false;
        for (int l = k + 1; l < 2 * n_; l++) {
            bool should_anti = (k / 2 == l / 2);
            if (symp(p, img_[l]) != int(should_anti)) return false;
        }
    }
    return true;
}

bool Tableau::operator==(const Tableau& o) const {
    if (n_ != o.n_) return false;
    for (int k = 0; k < 2 * n_; k++) {
        if (!(img_[k] == o.img_[k])) return false;
    }
    return true;
}

std::string Tableau::key() const {
    std::string s;
    for (int k = 0; k < 2 * n_; k++) {
        s += img_[k].str(n_);
        s += k % 2 ? ";" : ",";
    }
    return s;
}

void Tableau::append(const Tableau& local, const std::vector<int>& qubits) {
    if (int(qubits.size()) != local.n()) throw Error("append: qubit count mismatch");
    Tableau e(n_);
    for (int k = 0; k < local.n(); k++) {
        for (int which = 0; which < 2; which++) {
            const Pauli& lp = local.img_[2 * k + which];
            Pauli gp{0, 0, lp.phase};
            for (int m = 0; m < local.n(); m++) {
                if ((lp.x >> m) & 1) gp.x |= uint32_t{1} << qubits[m];
                if ((lp.z >> m) & 1) gp.z |= uint32_t{1} << qubits[m];
            }
            e.img_[2 * qubits[k] + which] = gp;
        }
    }
    for (int k = 0; k < 2 * n_; k++) img_[k] = e.conjugate(img_[k]);
}

void Tableau::h(int q) {
    Tableau l(1);
    l.set_images(0, Pauli::z_on(0), Pauli::x_on(0));
    append(l, {q});
}

void Tableau::s(int q) {
    Tableau l(1);
    l.set_images(0, Pauli::hermitian(1, 1, false), Pauli::z_on(0));
    append(l, {q});
}

void Tableau::cx(int c, int t) {
    Tableau l(2);
    l.set_images(0, Pauli{3, 0, 0}, Pauli::z_on(0));
    l.set_images(1, Pauli::x_on(1), Pauli{0, 3, 0});
    append(l, {c, t});
}

void Tableau::cz(int a, int b) {
    Tableau l(2);
    l.set_images(0, Pauli{1, 2, 0}, Pauli::z_on(0));
    l.set_images(1, Pauli{2, 1, 0}, Pauli::z_on(1));
    append(l, {a, b});
}

void Tableau::swap(int a, int b) {
    Tableau l(2);
    l.set_images(0, Pauli::x_on(1), Pauli::z_on(1));
    l.set_images(1, Pauli::x_on(0), Pauli::z_on(0));
    append(l, {a, b});
}

Tableau Tableau::from_gates(int n, const std::vector<CliffordGate>& gs) {
    Tableau t(n);
    for (const auto& g : gs) {
        switch (g.kind) {
            case CliffordGate::Kind::kH:
                t.h(g.q0);
                break;
            case CliffordGate::Kind::kP:
                t.s(g.q0);
                break;
            case CliffordGate::Kind::kCNOT:
                t.cx(g.q0, g.q1);
                break;
        }
    }
    return t;
}

GateMatrix Tableau::matrix() const {
    std::vector<std::pair<GateMatrix, std::vector<int>>> ops;
    for (const auto& g : clifford_to_canonical_circuit(*this)) {
        switch (g.kind) {
            case CliffordGate::Kind::kH:
                ops.push_back({gates::H(), {g.q0}});
                break;
            case CliffordGate::Kind::kP:
                ops.push_back({gates::P(), {g.q0}});
                break;
            case CliffordGate::Kind::kCNOT:
                ops.push_back({gates::CNOT(), {g.q0, g.q1}});
                break;
        }
    }
    return circuit_matrix(n_, ops);
}

Pauli tableau_conjugate(const Tableau& t, const Pauli& p) {
    if (((p.x | p.z) >> t.n()) != 0) throw Error("tableau_conjugate: width mismatch");
    return t.conjugate(p);
}

// ---------------------------------------------------------------- synthesis

namespace {

// Reduction record: gates appended to the working copy, in order.
struct Reducer {
    Tableau t;
    std::vector<std::pair<char, std::pair<int, int>>> rec;

    bool dx(int row, int q) const { return (t.x_image(row).x >> q) & 1; }
    bool dz(int row, int q) const { return (t.x_image(row).z >> q) & 1; }
    bool sx(int row, int q) const { return (t.z_image(row).x >> q) & 1; }
    bool sz(int row, int q) const { return (t.z_image(row).z >> q) & 1; }
    void H(int q) {
        t.h(q);
        rec.push_back({'H', {q, -1}});
    }
    void S(int q) {
        t.s(q);
        rec.push_back({'S', {q, -1}});
    }
    void CX(int c, int tq) {
        t.cx(c, tq);
        rec.push_back({'C', {c, tq}});
    }
    void SW(int a, int b) {
        t.swap(a, b);
        rec.push_back({'W', {a, b}});
    }
    void Zg(int q) {
        t.s(q);
        t.s(q);
        rec.push_back({'Z', {q, -1}});
    }
    void Xg(int q) {
        t.h(q);
        t.s(q);
        t.s(q);
        t.h(q);
        rec.push_back({'X', {q, -1}});
    }
};

}  // namespace

std::vector<CliffordGate> clifford_to_canonical_circuit(const Tableau& input) {
    if (!input.is_valid()) throw Error("clifford_to_canonical_circuit: invalid symplectic tableau");
    Reducer r{input, {}};
    const int n = input.n();
    for (int i = 0; i < n; i++) {
        // Put an X on the diagonal of destabilizer row i.
        if (!r.dx(i, i)) {
            bool done = false;
            for (int j = i + 1; j < n && !done; j++) {
                if (r.dx(i, j)) {
                    r.SW(j, i);
                    done = true;
                }
            }
            for (int j = i; j < n && !done; j++) {
                if (r.dz(i, j)) {
                    r.H(j);
                    if (j != i) r.SW(j, i);
                    done = true;
                }
            }
        }
        // Clear the rest of destabilizer row i.
        for (int j = i + 1; j < n; j++) {
            if (r.dx(i, j)) r.CX(i, j);
        }
        bool anyz = false;
        for (int j = i; j < n; j++) anyz = anyz || r.dz(i, j);
        if (anyz) {
            if (!r.dz(i, i)) r.S(i);
            for (int j = i + 1; j < n; j++) {
                if (r.dz(i, j)) r.CX(j, i);
            }
            r.S(i);
        }
        // Clear stabilizer row i.
        for (int j = i + 1; j < n; j++) {
            if (r.sz(i, j)) r.CX(j, i);
        }
        bool anyx = false;
        for (int j = i; j < n; j++) anyx = anyx || r.sx(i, j);
        if (anyx) {
            r.H(i);
            for (int j = i + 1; j < n; j++) {
                if (r.sx(i, j)) r.CX(i, j);
            }
            if (r.sz(i, i)) r.S(i);
            r.H(i);
        }
    }
    for (int i = 0; i < n; i++) {
        if (r.t.x_image(i).sign()) r.Zg(i);
        if (r.t.z_image(i).sign()) r.Xg(i);
    }
    if (r.t != Tableau(n)) throw Error("clifford synthesis did not reach identity");
    // The recorded sequence maps input to identity; emit its inverse.
    std::vector<CliffordGate> out;
    using K = CliffordGate::Kind;
    for (auto it = r.rec.rbegin(); it != r.rec.rend(); ++it) {
        auto [kind, q] = *it;
        switch (kind) {
            case 'H':
                out.push_back({K::kH, q.first});
                break;
            case 'S':
                for (int k = 0; k < 3; k++) out.push_back({K::kP, q.first});
                break;
            case 'C':
                out.push_back({K::kCNOT, q.first, q.second});
                break;
            case 'W':
                out.push_back({K::kCNOT, q.first, q.second});
                out.push_back({K::kCNOT, q.second, q.first});
                out.push_back({K::kCNOT, q.first, q.second});
                break;
            case 'Z':
                out.push_back({K::kP, q.first});
                out.push_back({K::kP, q.first});
                break;
            case 'X':
                out.push_back({K::kH, q.first});
                out.push_back({K::kP, q.first});
                out.push_back({K::kP, q.first});
                out.push_back({K::kH, q.first});
                break;
        }
    }
    return out;
}

Tableau sample_clifford(int n, Rng& rng) {
    if (n < 1 || n > Tableau::kMaxQubits) throw Error("sample_clifford: n out of range");
    Tableau t(n);
    std::vector<Pauli> prev;
    const uint64_t space = uint64_t{1} << (2 * n);
    auto draw = [&](const Pauli* anti) {
        while (true) {
            uint64_t v = rng.below(space);
            if (v == 0) continue;
            Pauli p{uint32_t(v & ((uint64_t{1} << n) - 1)), uint32_t(v >> n), 0};
            bool ok = true;
            for (const auto& q : prev) ok = ok && p.commutes(q);
            if (anti) ok = ok && !p.commutes(*anti);
            if (ok) return p;
        }
    };
    for (int k = 0; k < n; k++) {
        Pauli xi = draw(nullptr);
        Pauli zi = draw(&xi);
        prev.push_back(xi);
        prev.push_back(zi);
        t.set_images(k, xi, zi);
    }
    for (int k = 0; k < n; k++) {
        Pauli xi = t.x_image(k), zi = t.z_image(k);
        t.set_images(k, Pauli::hermitian(xi.x, xi.z, rng.bit()), Pauli::hermitian(zi.x, zi.z, rng.bit()));
    }
    return t;
}

// ---------------------------------------------------------------- clifford1

namespace clifford1 {
namespace {

struct Table {
    std::vector<Tableau> tabs;
    std::vector<GateMatrix> mats;
    std::map<std::string, int> by_key;
    std::vector<std::vector<int>> comp;
    std::vector<int> inv;

    Table() {
        const Pauli list[6] = {Pauli::hermitian(1, 0, false), Pauli::hermitian(1, 0, true),
                               Pauli::hermitian(1, 1, false), Pauli::hermitian(1, 1, true),
                               Pauli::hermitian(0, 1, false), Pauli::hermitian(0, 1, true)};
        for (int ix = 0; ix < 6; ix++) {
            for (int iz = 0; iz < 6; iz++) {
                if (list[ix].commutes(list[iz])) continue;
                Tableau t(1);
                t.set_images(0, list[ix], list[iz]);
                by_key[t.key()] = int(tabs.size());
                tabs.push_back(t);
            }
        }
        for (const auto& t : tabs) mats.push_back(t.matrix());
        comp.assign(kCount, std::vector<int>(kCount));
        inv.assign(kCount, 0);
        for (int a = 0; a < kCount; a++) {
            for (int b = 0; b < kCount; b++) comp[a][b] = by_key.at((tabs[a] * tabs[b]).key());
            inv[a] = by_key.at(tabs[a].inverse().key());
        }
    }
};

const Table& table() {
    static const Table t;
    return t;
}

}  // namespace

const Tableau& tableau(int index) { return table().tabs.at(index); }
const GateMatrix& matrix(int index) { return table().mats.at(index); }
int index_of(const Tableau& t) {
    if (t.n() != 1) throw Error("clifford1::index_of needs a 1-qubit tableau");
    auto it = table().by_key.find(t.key());
    if (it == table().by_key.end()) throw Error("not a valid single-qubit Clifford");
    return it->second;
}
int compose(int a, int b) { return table().comp[a][b]; }
int inverse(int a) { return table().inv[a]; }
int identity() { return index_of(Tableau(1)); }
int from_matrix(const GateMatrix& m) {
    for (int k = 0; k < kCount; k++) {
        if (table().mats[k].phase_distance(m) < 1e-9) return k;
    }
    return -1;
}

}  // namespace clifford1

// ---------------------------------------------------------------- UniversalGate

GateMatrix UniversalGate::matrix() const {
    if (is_t) return gates::T();
    if (name == "I") return gates::I();
    if (name == "X") return gates::X();
    if (name == "Y") return gates::Y();
    if (name == "Z") return gates::Z();
    if (name == "H") return gates::H();
    if (name == "P") return gates::P();
    if (name == "CNOT") return gates::CNOT();
    if (name == "CZ") return gates::CZ();
    if (name == "SWAP") return gates::SWAP();
    return clifford.matrix();
}

UniversalGate UniversalGate::named(const std::string& name) {
    using K = CliffordGate::Kind;
    UniversalGate g;
    g.name = name;
    if (name == "T") {
        g.is_t = true;
        return g;
    }
    std::vector<CliffordGate> seq;
    int n = 1;
    if (name == "I") {
    } else if (name == "X") {
        seq = {{K::kH, 0}, {K::kP, 0}, {K::kP, 0}, {K::kH, 0}};
    } else if (name == "Z") {
        seq = {{K::kP, 0}, {K::kP, 0}};
    } else if (name == "Y") {
        seq = {{K::kP, 0}, {K::kP, 0}, {K::kH, 0}, {K::kP, 0}, {K::kP, 0}, {K::kH, 0}};
    } else if (name == "H") {
        seq = {{K::kH, 0}};
    } else if (name == "P") {
        seq = {{K::kP, 0}};
    } else if (name == "CNOT") {
        n = 2;
        seq = {{K::kCNOT, 0, 1}};
    } else if (name == "CZ") {
        n = 2;
        seq = {{K::kH, 1}, {K::kCNOT, 0, 1}, {K::kH, 1}};
    } else if (name == "SWAP") {
        n = 2;
        seq = {{K::kCNOT, 0, 1}, {K::kCNOT, 1, 0}, {K::kCNOT, 0, 1}};
    } else {
        throw ParseError("unknown gate name: " + name);
    }
    g.arity = n;
    g.clifford = Tableau::from_gates(n, seq);
    return g;
}

UniversalGate UniversalGate::clifford2(const Tableau& t) {
    if (t.n() != 2 || !t.is_valid()) throw ParseError("clifford2 gate needs a valid 2-qubit tableau");
    UniversalGate g;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%05x", clifford2_encode(t));
    g.name = std::string("clifford2:") + buf;
    g.arity = 2;
    g.clifford = t;
    return g;
}

UniversalGate UniversalGate::identity(int arity) {
    if (arity == 1) return named("I");
    if (arity == 2) return clifford2(Tableau(2));
    throw Error("identity gate arity must be 1 or 2");
}

UniversalGate UniversalGate::parse(const std::string& name) {
    const std::string prefix = "clifford2:";
    if (name.rfind(prefix, 0) == 0) {
        std::string hex = name.substr(prefix.size());
        if (hex.empty() || hex.size() > 5) throw ParseError("bad clifford2 code: " + name);
        uint32_t code = 0;
        for (char c : hex) {
            int v;
            if (c >= '0' && c <= '9') {
                v = c - '0';
            } else if (c >= 'a' && c <= 'f') {
                v = c - 'a' + 10;
            } else if (c >= 'A' && c <= 'F') {
                v = c - 'A' + 10;
            } else {
                throw ParseError("bad clifford2 code: " + name);
            }
            code = (code << 4) | uint32_t(v);
        }
        Tableau t(2);
        if (!clifford2_decode(code, &t)) throw ParseError("clifford2 code is not a valid tableau: " + name);
        return clifford2(t);
    }
    return named(name);
}

bool UniversalGate::operator==(const UniversalGate& o) const {
    return name == o.name && arity == o.arity && is_t == o.is_t && (is_t || clifford == o.clifford);
}

PushResult pauli_pushthrough(const UniversalGate& g, const Pauli& p) {
    if (((p.x | p.z) >> g.arity) != 0) throw Error("pauli_pushthrough: Pauli wider than gate");
    PushResult res;
    if (g.is_t) {
        int a = p.x & 1, b = p.z & 1;
        if (a == 0) {
            res.r = {PXElement::make(p.phase, 0, 2 * b)};
        } else {
            // T X T^dag = omega^-1 P X = omega^-1 i X P^3.
            res.r = {PXElement::make(p.phase + 1, 1, 3 + 2 * b)};
            res.omega_power = 7;
        }
        return res;
    }
    Pauli q = g.clifford.conjugate(p);
    for (int j = 0; j < g.arity; j++) {
        int xj = (q.x >> j) & 1, zj = (q.z >> j) & 1;
        res.r.push_back(PXElement::make(j == 0 ? q.phase : 0, xj, 2 * zj));
    }
    return res;
}

// ---------------------------------------------------------------- randomizer

RandomizerElement RandomizerElement::identity(int kappa) {
    if (kappa < 1) throw Error("randomizer kappa must be >= 1");
    RandomizerElement e;
    e.kappa = kappa;
    e.singles.assign(num_singles(kappa), uint8_t(clifford1::identity()));
    e.pairs.assign(num_pairs(kappa), Tableau(2));
    return e;
}

bool RandomizerElement::operator==(const RandomizerElement& o) const {
    return kappa == o.kappa && singles == o.singles && pairs == o.pairs;
}

size_t RandomizerElement::encoded_bits(int kappa) {
    return 5 * size_t(num_singles(kappa)) + 20 * size_t(num_pairs(kappa));
}

int RandomizerElement::pair_index(int kappa, int i, int j) {
    if (!(0 <= i && i < j && j <= kappa)) throw Error("bad pair index");
    int idx = 0;
    for (int a = 0; a < i; a++) idx += kappa - a;
    return idx + (j - i - 1);
}

RandomizerElement sample_randomizer(int kappa, Rng& rng) {
    RandomizerElement e = RandomizerElement::identity(kappa);
    for (auto& s : e.singles) s = uint8_t(rng.below(clifford1::kCount));
    for (auto& p : e.pairs) p = sample_clifford(2, rng);
    return e;
}

uint32_t clifford2_encode(const Tableau& t) {
    uint32_t code = 0;
    const Pauli* imgs[4] = {&t.x_image(0), &t.z_image(0), &t.x_image(1), &t.z_image(1)};
    for (auto* p : imgs) {
        uint32_t nib = ((p->x & 1) << 3) | ((p->z & 1) << 2) | (((p->x >> 1) & 1) << 1) | ((p->z >> 1) & 1);
        code = (code << 4) | nib;
    }
    for (auto* p : imgs) code = (code << 1) | uint32_t(p->sign());
    return code;
}

bool clifford2_decode(uint32_t code, Tableau* out) {
    Pauli imgs[4];
    for (int k = 0; k < 4; k++) {
        uint32_t nib = (code >> (16 - 4 * k)) & 0xF;
        bool sign = (code >> (3 - k)) & 1;
        uint32_t x = ((nib >> 3) & 1) | (((nib >> 1) & 1) << 1);
        uint32_t z = ((nib >> 2) & 1) | ((nib & 1) << 1);
        imgs[k] = Pauli::hermitian(x, z, sign);
    }
    Tableau t(2);
    t.set_images(0, imgs[0], imgs[1]);
    t.set_images(1, imgs[2], imgs[3]);
    if (!t.is_valid()) return false;
    *out = t;
    return true;
}

Bits randomizer_encode(const RandomizerElement& e) {
    Bits b;
    for (uint8_t s : e.singles) b.append_uint(s, 5);
    for (const auto& p : e.pairs) b.append_uint(clifford2_encode(p), 20);
    return b;
}

namespace {
RandomizerElement decode_impl(const Bits& bits, int kappa, bool lenient, int* invalid) {
    if (bits.size() != RandomizerElement::encoded_bits(kappa)) {
        throw ParseError("malformed randomizer encoding: length " + std::to_string(bits.size()) + ", expected " +
                         std::to_string(RandomizerElement::encoded_bits(kappa)));
    }
    RandomizerElement e = RandomizerElement::identity(kappa);
    int bad = 0;
    size_t pos = 0;
    for (auto& s : e.singles) {
        uint64_t v = bits.read_uint(pos, 5);
        pos += 5;
        if (v >= uint64_t(clifford1::kCount)) {
            if (!lenient) throw ParseError("malformed randomizer encoding: unused single-qubit code");
            bad++;
            continue;
        }
        s = uint8_t(v);
    }
    for (auto& p : e.pairs) {
        uint32_t v = uint32_t(bits.read_uint(pos, 20));
        pos += 20;
        if (!clifford2_decode(v, &p)) {
            if (!lenient) throw ParseError("malformed randomizer encoding: symplectic violation in pair slot");
            bad++;
        }
    }
    if (invalid) *invalid = bad;
    return e;
}
}  // namespace

RandomizerElement randomizer_decode(const Bits& bits, int kappa) { return decode_impl(bits, kappa, false, nullptr); }

RandomizerElement randomizer_decode_lenient(const Bits& bits, int kappa, int* invalid_slots) {
    return decode_impl(bits, kappa, true, invalid_slots);
}

RandomizerElement randomizer_compose(const RandomizerElement& a, const RandomizerElement& b) {
    if (a.kappa != b.kappa) throw Error("randomizer_compose: kappa mismatch");
    RandomizerElement r = a;
    for (size_t k = 0; k < r.singles.size(); k++) r.singles[k] = uint8_t(clifford1::compose(a.singles[k], b.singles[k]));
    for (size_t k = 0; k < r.pairs.size(); k++) r.pairs[k] = a.pairs[k] * b.pairs[k];
    return r;
}

RandomizerElement randomizer_inverse(const RandomizerElement& a) {
    RandomizerElement r = a;
    for (auto& s : r.singles) s = uint8_t(clifford1::inverse(s));
    for (auto& p : r.pairs) p = p.inverse();
    return r;
}

}  // namespace qgc
