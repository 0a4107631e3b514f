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

#include "qgc/circuit.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qgc {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

bool is_ident(const std::string& s) {
    if (s.empty() || !(std::isalpha(uint8_t(s[0])) || s[0] == '_')) return false;
    for (char c : s) {
        if (!(std::isalnum(uint8_t(c)) || c == '_')) return false;
    }
    return true;
}

// "in3" -> 3 for prefix "in"; -1 otherwise.
int terminal_index(const std::string& name, const std::string& prefix) {
    if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) return -1;
    int v = 0;
    for (size_t k = prefix.size(); k < name.size(); k++) {
        if (!std::isdigit(uint8_t(name[k]))) return -1;
        v = v * 10 + (name[k] - '0');
        if (v > 1000000) return -1;
    }
    if (name.size() > prefix.size() + 1 && name[prefix.size()] == '0') return -1;
    return v;
}

struct GateSpec {
    int line = 0;
    std::vector<std::string> in, out;
};

struct Diagnostics {
    std::vector<std::string> items;
    void add(int line, const std::string& msg) {
        items.push_back(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg);
    }
    void raise_if_any() const {
        if (items.empty()) return;
        std::string all;
        for (const auto& d : items) all += d + "\n";
        throw ParseError(all);
    }
};

// Builds and validates a topology from named wires.
Topology build_topology(int n, const std::vector<int>& zeros, const std::vector<int>& discards,
                        const std::vector<GateSpec>& specs, const std::vector<std::pair<int, int>>& connects,
                        Diagnostics& diag) {
    Topology t;
    t.n = n;
    t.zero_inputs = zeros;
    t.discards = discards;
    std::sort(t.zero_inputs.begin(), t.zero_inputs.end());
    std::sort(t.discards.begin(), t.discards.end());
    for (size_t k = 1; k < t.zero_inputs.size(); k++) {
        if (t.zero_inputs[k] == t.zero_inputs[k - 1]) diag.add(0, "zero input listed twice");
    }
    for (size_t k = 1; k < t.discards.size(); k++) {
        if (t.discards[k] == t.discards[k - 1]) diag.add(0, "discard listed twice");
    }
    for (int z : t.zero_inputs) {
        if (z < 0 || z >= n) diag.add(0, "zero input out of range: " + std::to_string(z));
    }
    for (int d : t.discards) {
        if (d < 0 || d >= n) diag.add(0, "discard out of range: " + std::to_string(d));
    }

    std::map<std::string, int> id;
    std::vector<int> first_line;
    auto wire = [&](const std::string& name, int line) {
        auto it = id.find(name);
        if (it != id.end()) return it->second;
        int w = int(t.wire_names.size());
        id[name] = w;
        t.wire_names.push_back(name);
        t.wire_src.push_back({WireEnd::Kind::kTerminal, -1, 0});
        t.wire_dst.push_back({WireEnd::Kind::kTerminal, -1, 0});
        first_line.push_back(line);
        return w;
    };
    std::vector<bool> has_src, has_dst;
    auto grow = [&]() {
        has_src.resize(t.wire_names.size(), false);
        has_dst.resize(t.wire_names.size(), false);
    };
    auto set_src = [&](int w, WireEnd e, int line) {
        grow();
        if (has_src[w]) {
            diag.add(line, "in-degree violation: wire '" + t.wire_names[w] + "' has two sources");
            return;
        }
        has_src[w] = true;
        t.wire_src[w] = e;
    };
    auto set_dst = [&](int w, WireEnd e, int line) {
        grow();
        if (has_dst[w]) {
            diag.add(line, "out-degree violation: wire '" + t.wire_names[w] + "' feeds two consumers");
            return;
        }
        has_dst[w] = true;
        t.wire_dst[w] = e;
    };

    // Explicit input terminals first so they get the lowest wire numbers.
    std::set<std::string> mentioned;
    for (const auto& g : specs) {
        for (const auto& s : g.in) mentioned.insert(s);
        for (const auto& s : g.out) mentioned.insert(s);
    }
    std::vector<bool> input_bound(n, false), output_bound(n, false);
    t.input_wire.assign(n, -1);
    t.output_wire.assign(n, -1);
    for (int i = 0; i < n; i++) {
        std::string nm = "in" + std::to_string(i);
        bool used = mentioned.count(nm) > 0;
        for (const auto& [ci, cj] : connects) used = used || ci == i;
        if (!used) continue;
        int w = wire(nm, 0);
        set_src(w, {WireEnd::Kind::kTerminal, i, 0}, 0);
        t.input_wire[i] = w;
        input_bound[i] = true;
    }
    for (size_t g = 0; g < specs.size(); g++) {
        for (size_t k = 0; k < specs[g].in.size(); k++) {
            int w = wire(specs[g].in[k], specs[g].line);
            set_dst(w, {WireEnd::Kind::kGate, int(g), int(k)}, specs[g].line);
        }
        for (size_t k = 0; k < specs[g].out.size(); k++) {
            const std::string& nm = specs[g].out[k];
            if (terminal_index(nm, "in") >= 0 && terminal_index(nm, "in") < n) {
                diag.add(specs[g].line, "in-degree violation: input wire '" + nm + "' written by a gate");
                continue;
            }
            int w = wire(nm, specs[g].line);
            set_src(w, {WireEnd::Kind::kGate, int(g), int(k)}, specs[g].line);
        }
    }
    grow();
    for (const auto& [ci, cj] : connects) {
        int w = id.at("in" + std::to_string(ci));
        if (output_bound[cj]) {
            diag.add(0, "output " + std::to_string(cj) + " connected twice");
            continue;
        }
        set_dst(w, {WireEnd::Kind::kTerminal, cj, 0}, 0);
        t.output_wire[cj] = w;
        output_bound[cj] = true;
    }
    for (int j = 0; j < n; j++) {
        auto it = id.find("out" + std::to_string(j));
        if (it == id.end() || output_bound[j]) continue;
        set_dst(it->second, {WireEnd::Kind::kTerminal, j, 0}, 0);
        t.output_wire[j] = it->second;
        output_bound[j] = true;
    }
    grow();
    // Remaining unsourced / unconsumed wires bind to free terminals in order of appearance.
    for (int w = 0; w < t.num_wires(); w++) {
        if (has_src[w]) continue;
        int i = int(std::find(input_bound.begin(), input_bound.end(), false) - input_bound.begin());
        if (i >= n) {
            diag.add(first_line[w], "dangling wire '" + t.wire_names[w] + "' has no source");
            continue;
        }
        set_src(w, {WireEnd::Kind::kTerminal, i, 0}, 0);
        t.input_wire[i] = w;
        input_bound[i] = true;
    }
    for (int w = 0; w < t.num_wires(); w++) {
        if (has_dst[w]) continue;
        int j = int(std::find(output_bound.begin(), output_bound.end(), false) - output_bound.begin());
        if (j >= n) {
            diag.add(first_line[w], "dangling wire '" + t.wire_names[w] + "' has no consumer");
            continue;
        }
        set_dst(w, {WireEnd::Kind::kTerminal, j, 0}, 0);
        t.output_wire[j] = w;
        output_bound[j] = true;
    }
    for (int i = 0; i < n; i++) {
        if (!input_bound[i]) diag.add(0, "input " + std::to_string(i) + " is not connected");
        if (!output_bound[i]) diag.add(0, "output " + std::to_string(i) + " is not connected");
    }
    t.gates.resize(specs.size());
    for (size_t g = 0; g < specs.size(); g++) {
        for (const auto& s : specs[g].in) t.gates[g].inwires.push_back(id.count(s) ? id.at(s) : -1);
        for (const auto& s : specs[g].out) t.gates[g].outwires.push_back(id.count(s) ? id.at(s) : -1);
    }
    if (diag.items.empty()) {
        std::vector<int> order = evaluation_order(t);
        if (int(order.size()) != t.num_gates()) diag.add(0, "cycle in gate graph");
    }
    return t;
}

}  // namespace

bool Topology::is_zero(int i) const {
    return std::binary_search(zero_inputs.begin(), zero_inputs.end(), i);
}

bool Topology::is_discard(int j) const { return std::binary_search(discards.begin(), discards.end(), j); }

std::string Topology::digest() const {
    uint64_t h = splitmix64(uint64_t(n));
    auto mix = [&](int64_t v) { h = splitmix64(h ^ uint64_t(v)); };
    mix(0x7a);
    for (int z : zero_inputs) mix(z);
    mix(0x7b);
    for (int d : discards) mix(d);
    mix(0x7c);
    for (const auto& g : gates) {
        mix(g.arity());
        for (int w : g.inwires) mix(w);
        for (int w : g.outwires) mix(w);
    }
    mix(0x7d);
    for (int w : input_wire) mix(w);
    for (int w : output_wire) mix(w);
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Circuit parse_circuit(const std::string& text) {
    Diagnostics diag;
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    bool header = false;
    int n_in = -1, n_out = -1;
    std::vector<int> zeros, discards;
    std::vector<GateSpec> specs;
    std::vector<UniversalGate> gates;
    std::vector<std::pair<int, int>> connects;
    std::vector<int> connect_lines;

    auto parse_int_list = [&](const std::string& s, int line, std::vector<int>& out) {
        for (const auto& tok : split(s, ',')) {
            if (tok.empty()) continue;
            try {
                size_t used = 0;
                int v = std::stoi(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                out.push_back(v);
            } catch (const std::exception&) {
                diag.add(line, "bad integer '" + tok + "'");
            }
        }
    };

    while (std::getline(is, raw)) {
        line_no++;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (!header) {
            if (line != "qgc-circuit v1") {
                diag.add(line_no, "expected header 'qgc-circuit v1'");
                diag.raise_if_any();
            }
            header = true;
            continue;
        }
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        std::string rest;
        std::getline(ls, rest);
        rest = trim(rest);
        if (kw == "inputs" || kw == "outputs") {
            std::vector<int> v;
            parse_int_list(rest, line_no, v);
            if (v.size() != 1 || v[0] < 0) {
                diag.add(line_no, "expected one non-negative count after '" + kw + "'");
                continue;
            }
            (kw == "inputs" ? n_in : n_out) = v[0];
        } else if (kw == "zero") {
            parse_int_list(rest, line_no, zeros);
        } else if (kw == "discard") {
            parse_int_list(rest, line_no, discards);
        } else if (kw == "connect") {
            std::istringstream cs(rest);
            std::string a, b, extra;
            cs >> a >> b >> extra;
            int i = terminal_index(a, "in"), j = terminal_index(b, "out");
            if (i < 0 || j < 0 || !extra.empty()) {
                diag.add(line_no, "connect expects 'connect in<i> out<j>'");
                continue;
            }
            connects.push_back({i, j});
            connect_lines.push_back(line_no);
        } else if (kw == "gate") {
            std::istringstream gs(rest);
            std::string name, a, b, extra;
            gs >> name >> a >> b >> extra;
            GateSpec spec;
            spec.line = line_no;
            if (a.rfind("in=", 0) != 0 || b.rfind("out=", 0) != 0 || !extra.empty()) {
                diag.add(line_no, "gate line must read 'gate <name> in=<wires> out=<wires>'");
                continue;
            }
            spec.in = split(a.substr(3), ',');
            spec.out = split(b.substr(4), ',');
            bool ok = true;
            for (const auto& w : spec.in) ok = ok && is_ident(w);
            for (const auto& w : spec.out) ok = ok && is_ident(w);
            if (!ok) {
                diag.add(line_no, "wire names must be identifiers");
                continue;
            }
            std::set<std::string> uniq(spec.in.begin(), spec.in.end());
            uniq.insert(spec.out.begin(), spec.out.end());
            if (uniq.size() != spec.in.size() + spec.out.size()) {
                diag.add(line_no, "a gate cannot name the same wire twice");
                continue;
            }
            UniversalGate g;
            try {
                g = UniversalGate::parse(name);
            } catch (const ParseError&) {
                diag.add(line_no, "unknown gate name '" + name + "'");
                continue;
            }
            if (int(spec.in.size()) != g.arity || int(spec.out.size()) != g.arity) {
                diag.add(line_no, "arity mismatch: gate " + name + " takes " + std::to_string(g.arity) + " wires");
                continue;
            }
            specs.push_back(spec);
            gates.push_back(g);
        } else {
            diag.add(line_no, "unknown keyword '" + kw + "'");
        }
    }
    if (!header) diag.add(0, "empty circuit file");
    if (n_in < 0) diag.add(0, "missing 'inputs' declaration");
    if (n_out < 0) diag.add(0, "missing 'outputs' declaration");
    if (n_in >= 0 && n_out >= 0 && n_in != n_out) diag.add(0, "inputs and outputs must have the same count");
    for (size_t k = 0; k < connects.size(); k++) {
        if (connects[k].first >= n_in || connects[k].second >= n_in) {
            diag.add(connect_lines[k], "connect terminal out of range");
        }
    }
    diag.raise_if_any();
    Circuit c;
    c.topo = build_topology(n_in, zeros, discards, specs, connects, diag);
    diag.raise_if_any();
    c.gates = gates;
    return c;
}

std::string print_circuit(const Circuit& c) {
    const Topology& t = c.topo;
    std::ostringstream os;
    os << "qgc-circuit v1\n";
    os << "inputs " << t.n << "\noutputs " << t.n << "\n";
    auto list = [&](const char* kw, const std::vector<int>& v) {
        if (v.empty()) return;
        os << kw << " ";
        for (size_t k = 0; k < v.size(); k++) os << (k ? "," : "") << v[k];
        os << "\n";
    };
    list("zero", t.zero_inputs);
    list("discard", t.discards);
    auto wire_name = [&](int w) { return t.wire_names[w]; };
    for (int g = 0; g < t.num_gates(); g++) {
        os << "gate " << c.gates[g].name << " in=";
        for (size_t k = 0; k < t.gates[g].inwires.size(); k++) os << (k ? "," : "") << wire_name(t.gates[g].inwires[k]);
        os << " out=";
        for (size_t k = 0; k < t.gates[g].outwires.size(); k++) {
            os << (k ? "," : "") << wire_name(t.gates[g].outwires[k]);
        }
        os << "\n";
    }
    for (int w = 0; w < t.num_wires(); w++) {
        if (t.is_input_wire(w) && t.is_output_wire(w)) {
            os << "connect in" << t.wire_src[w].index << " out" << t.wire_dst[w].index << "\n";
        }
    }
    return os.str();
}

Circuit load_circuit_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open circuit file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_circuit(ss.str());
}

std::vector<int> evaluation_order(const Topology& t) {
    std::vector<int> pending(t.num_gates(), 0);
    std::vector<std::vector<int>> succ(t.num_gates());
    for (int g = 0; g < t.num_gates(); g++) {
        for (int w : t.gates[g].inwires) {
            if (w >= 0 && t.wire_src[w].kind == WireEnd::Kind::kGate) {
                pending[g]++;
                succ[t.wire_src[w].index].push_back(g);
            }
        }
    }
    std::set<int> ready;
    for (int g = 0; g < t.num_gates(); g++) {
        if (pending[g] == 0) ready.insert(g);
    }
    std::vector<int> order;
    while (!ready.empty()) {
        int g = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(g);
        for (int s : succ[g]) {
            if (--pending[s] == 0) ready.insert(s);
        }
    }
    return order;
}

bool is_topological(const Topology& t, const std::vector<int>& order) {
    if (int(order.size()) != t.num_gates()) return false;
    std::vector<int> pos(t.num_gates(), -1);
    for (size_t k = 0; k < order.size(); k++) {
        if (order[k] < 0 || order[k] >= t.num_gates() || pos[order[k]] >= 0) return false;
        pos[order[k]] = int(k);
    }
    for (int g = 0; g < t.num_gates(); g++) {
        for (int w : t.gates[g].inwires) {
            if (t.wire_src[w].kind == WireEnd::Kind::kGate && pos[t.wire_src[w].index] >= pos[g]) return false;
        }
    }
    return true;
}

Circuit empty_circuit(const Topology& t) {
    Circuit c;
    c.topo = t;
    for (const auto& g : t.gates) c.gates.push_back(UniversalGate::identity(g.arity()));
    return c;
}

std::vector<int> io_bijection(const Topology& t) {
    std::vector<int> xi(t.n, -1);
    for (int i = 0; i < t.n; i++) {
        int w = t.input_wire[i];
        while (t.wire_dst[w].kind == WireEnd::Kind::kGate) {
            const WireEnd& e = t.wire_dst[w];
            w = t.gates[e.index].outwires[e.slot];
        }
        xi[i] = t.wire_dst[w].index;
    }
    return xi;
}

namespace {
std::string wire_reg(int w) { return "#w" + std::to_string(w); }
}  // namespace

QuantumState reference_evaluate(const Circuit& c, const QuantumState& input) {
    const Topology& t = c.topo;
    QuantumState s = input;
    std::vector<std::string> side;
    for (const auto& name : input.regs().names()) {
        int i = terminal_index(name, "in");
        if (i >= 0 && i < t.n) continue;
        side.push_back(name);
    }
    int live = 0;
    for (int i = 0; i < t.n; i++) {
        std::string nm = "in" + std::to_string(i);
        if (t.is_zero(i)) {
            if (s.regs().has(nm)) throw Error("input register " + nm + " is a zero input");
            s.add_zeros(nm, 1);
        } else {
            if (!s.regs().has(nm)) throw Error("missing input register " + nm);
            if (s.regs().width(nm) != 1) throw Error("input register " + nm + " must be one qubit");
            live++;
        }
        s.rename(nm, wire_reg(t.input_wire[i]));
    }
    if (live != t.num_live_inputs()) throw Error("input width mismatch");
    for (int g : evaluation_order(t)) {
        const auto& node = t.gates[g];
        std::vector<QubitAddr> targets;
        for (int w : node.inwires) targets.push_back({wire_reg(w), 0});
        s.apply(c.gates[g].matrix(), targets);
        for (size_t k = 0; k < node.inwires.size(); k++) s.rename(wire_reg(node.inwires[k]), wire_reg(node.outwires[k]));
    }
    std::vector<std::string> order = side, keep = side;
    for (int j = 0; j < t.n; j++) {
        std::string nm = "out" + std::to_string(j);
        s.rename(wire_reg(t.output_wire[j]), nm);
        order.push_back(nm);
        if (!t.is_discard(j)) keep.push_back(nm);
    }
    s = s.reordered(order);
    if (keep.size() == order.size()) return s;
    return partial_trace(s, keep);
}

bool is_clifford_circuit(const Circuit& c) {
    for (const auto& g : c.gates) {
        if (g.is_t) return false;
    }
    return true;
}

Tableau circuit_tableau(const Circuit& c) {
    const Topology& t = c.topo;
    if (!is_clifford_circuit(c)) throw Error("circuit contains a non-Clifford gate");
    if (!t.zero_inputs.empty() || !t.discards.empty()) throw Error("circuit tableau needs no zero inputs or discards");
    if (t.n > Tableau::kMaxQubits) throw BudgetError("circuit tableau supports at most 6 qubits");
    Tableau tab(t.n);
    std::vector<int> pos(t.num_wires(), -1);
    for (int i = 0; i < t.n; i++) pos[t.input_wire[i]] = i;
    for (int g : evaluation_order(t)) {
        const auto& node = t.gates[g];
        std::vector<int> qs;
        for (int w : node.inwires) qs.push_back(pos[w]);
        tab.append(c.gates[g].clifford, qs);
        for (size_t k = 0; k < qs.size(); k++) pos[node.outwires[k]] = qs[k];
    }
    // Move output j to position j.
    Tableau perm(t.n);
    for (int j = 0; j < t.n; j++) {
        int p = pos[t.output_wire[j]];
        perm.set_images(p, Pauli::x_on(j), Pauli::z_on(j));
    }
    return perm * tab;
}

Circuit random_circuit(const RandomCircuitOptions& opt, Rng& rng) {
    const int n = opt.inputs;
    if (n < 1) throw Error("random circuit needs at least one input");
    static const char* one_q[] = {"I", "X", "Y", "Z", "H", "P", "T"};
    static const char* two_q[] = {"CNOT", "CZ", "SWAP"};
    std::vector<std::string> line(n);
    for (int i = 0; i < n; i++) line[i] = "in" + std::to_string(i);
    std::vector<GateSpec> specs;
    std::vector<UniversalGate> gates;
    int t_at = opt.require_t ? int(rng.below(std::max(1, opt.gates))) : -1;
    int next = 0;
    for (int g = 0; g < opt.gates; g++) {
        bool two = opt.allow_two_qubit && n >= 2 && g != t_at && rng.below(3) == 0;
        UniversalGate gate;
        GateSpec spec;
        if (two) {
            int a = int(rng.below(n));
            int b = int(rng.below(n - 1));
            if (b >= a) b++;
            uint64_t pick = rng.below(4);
            gate = pick < 3 ? UniversalGate::named(two_q[pick]) : UniversalGate::clifford2(sample_clifford(2, rng));
            spec.in = {line[a], line[b]};
            line[a] = "w" + std::to_string(next++);
            line[b] = "w" + std::to_string(next++);
            spec.out = {line[a], line[b]};
        } else {
            int a = int(rng.below(n));
            if (g == t_at) {
                gate = UniversalGate::named("T");
            } else {
                int lim = opt.clifford_only ? 6 : 7;
                gate = UniversalGate::named(one_q[rng.below(lim)]);
            }
            spec.in = {line[a]};
            line[a] = "w" + std::to_string(next++);
            spec.out = {line[a]};
        }
        specs.push_back(spec);
        gates.push_back(gate);
    }
    // Random output permutation gives crossed wires.
    std::vector<int> perm(n);
    for (int i = 0; i < n; i++) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    std::vector<std::pair<int, int>> connects;
    for (int i = 0; i < n; i++) {
        std::string out = "out" + std::to_string(perm[i]);
        if (line[i].rfind("in", 0) == 0) {
            connects.push_back({terminal_index(line[i], "in"), perm[i]});
            continue;
        }
        for (auto& s : specs) {
            for (auto& o : s.out) {
                if (o == line[i]) o = out;
            }
        }
    }
    std::vector<int> all(n);
    for (int i = 0; i < n; i++) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng.engine());
    std::vector<int> zeros(all.begin(), all.begin() + std::min(n, opt.zero_inputs));
    std::shuffle(all.begin(), all.end(), rng.engine());
    std::vector<int> discards(all.begin(), all.begin() + std::min(n, opt.discards));
    Diagnostics diag;
    Circuit c;
    c.topo = build_topology(n, zeros, discards, specs, connects, diag);
    diag.raise_if_any();
    c.gates = gates;
    return c;
}

}  // namespace qgc
