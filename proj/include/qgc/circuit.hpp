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

#ifndef QGC_CIRCUIT_HPP
#define QGC_CIRCUIT_HPP

#include <string>
#include <vector>

#include "qgc/groups.hpp"
#include "qgc/qstate.hpp"

namespace qgc {

/// Where a wire starts or ends: a circuit terminal or a gate slot.
struct WireEnd {
    enum class Kind { kTerminal, kGate };
    Kind kind = Kind::kTerminal;
    int index = -1;  // terminal number or gate index
    int slot = 0;    // position in the gate's inwire/outwire list
};

/// Circuit shape without gate assignments.
///
/// Wires are numbered 0..num_wires()-1. Input terminal i starts wire
/// input_wire[i]; output terminal j ends wire output_wire[j]. A wire that runs
/// straight from an input to an output is a pass-through ("connect" in files).
struct Topology {
    int n = 0;
    std::vector<int> zero_inputs;
    std::vector<int> discards;
    std::vector<std::string> wire_names;
    std::vector<WireEnd> wire_src, wire_dst;
    std::vector<int> input_wire, output_wire;
    struct Node {
        std::vector<int> inwires, outwires;
        int arity() const { return int(inwires.size()); }
    };
    std::vector<Node> gates;

    int num_wires() const { return int(wire_names.size()); }
    int num_gates() const { return int(gates.size()); }
    bool is_zero(int i) const;
    bool is_discard(int j) const;
    /// Number of live inputs (n minus zero inputs) and kept outputs.
    int num_live_inputs() const { return n - int(zero_inputs.size()); }
    int num_kept_outputs() const { return n - int(discards.size()); }
    /// Output terminal reached by a wire through the output side, or -1.
    bool is_output_wire(int w) const { return wire_dst[w].kind == WireEnd::Kind::kTerminal; }
    bool is_input_wire(int w) const { return wire_src[w].kind == WireEnd::Kind::kTerminal; }
    /// Stable short hash of the shape (wire names and gate names excluded).
    std::string digest() const;
    bool same_shape(const Topology& o) const { return digest() == o.digest(); }
};

struct Circuit {
    Topology topo;
    std::vector<UniversalGate> gates;
};

/// Parses the line-oriented circuit format. Throws ParseError carrying every
/// diagnostic with its line number.
Circuit parse_circuit(const std::string& text);
std::string print_circuit(const Circuit& c);
Circuit load_circuit_file(const std::string& path);

/// Deterministic topological order; among ready gates the lowest index wins.
std::vector<int> evaluation_order(const Topology& t);
bool is_topological(const Topology& t, const std::vector<int>& order);

Circuit empty_circuit(const Topology& t);
/// xi[i] = output terminal reached from input i through identity gates.
std::vector<int> io_bijection(const Topology& t);

/// Applies the circuit. Registers named in<i> are circuit inputs (non-zero
/// positions only); every other register is carried along untouched. The
/// result lists the untouched registers first, then out<j> for kept outputs.
QuantumState reference_evaluate(const Circuit& c, const QuantumState& input);

/// Tableau of an all-Clifford circuit with no zero inputs or discards; qubit i
/// of the tableau is input i on the way in and output i on the way out.
Tableau circuit_tableau(const Circuit& c);
bool is_clifford_circuit(const Circuit& c);

struct RandomCircuitOptions {
    int inputs = 2;
    int gates = 3;
    bool require_t = false;
    bool allow_two_qubit = true;
    int zero_inputs = 0;
    int discards = 0;
    bool clifford_only = false;
};
Circuit random_circuit(const RandomCircuitOptions& opt, Rng& rng);

}  // namespace qgc

#endif
