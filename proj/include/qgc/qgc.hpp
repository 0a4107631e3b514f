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

#ifndef QGC_QGC_HPP
#define QGC_QGC_HPP

#include <array>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qgc/circuit.hpp"
#include "qgc/common.hpp"
#include "qgc/cre.hpp"
#include "qgc/gadgets.hpp"
#include "qgc/groups.hpp"
#include "qgc/qstate.hpp"

namespace qgc {

// Register conventions for states handed to enc/dec:
//   input  : "in<i>" for every live input position i, plus side registers
//   output : side registers (original order), then "out<j>" for kept j
// Per-wire registers inside a bundle: e1.<w>, e2.<w>, z.<w>, x.<w>, b.<w>.

constexpr uint64_t kDefaultBudgetBits = uint64_t{64} * 1024 * 1024 * 8;

struct LabelPlan {
    struct GateSig {
        int n_in = 0;
        uint64_t m_out = 0;
        uint64_t offline_bits = 0;
        uint64_t randomness_bits = 0;
    };
    struct Layer {
        int layer = 0;
        uint64_t max_kappa = 0;
        uint64_t classical_bits = 0;
    };

    CreParams cre;
    std::vector<uint64_t> kappa;  // per wire
    std::vector<int> layer;       // per wire; output wires are layer 0
    std::vector<GateSig> sig;     // per gate
    std::vector<Layer> layers;    // one entry per layer, layer 0 first
    uint64_t total_bits = 0;      // offline strings plus randomness, saturating

    uint64_t max_kappa() const;
    int kappa_of(int wire) const;
    /// Multi-line "layer N: max_kappa=... bits=..." report.
    std::string report() const;
    std::string summary() const;
};

/// kappa is 1 on output wires; a gate's inwires get the label length of its
/// correction function. Throws BudgetError (with the report) when the total
/// classical size exceeds budget_bits.
LabelPlan plan_labels(const Topology& t, const CreParams& p, uint64_t budget_bits = kDefaultBudgetBits);

struct RandomnessJ {
    std::vector<Bits> r;                   // per gate CRE randomness
    std::vector<RandomizerElement> A;      // per wire; kappa 0 placeholder on input wires
    std::vector<std::array<int, 2>> s, t;  // per wire (z, x)
    std::vector<std::array<int, 2>> o;     // per wire (z, x); used on output wires
    Bits epr;                              // per input position, pre-measured pair bit

    bool operator==(const RandomnessJ& o) const;
    Bits serialize() const;
    static RandomnessJ parse(const Bits& bits, const Topology& t, const LabelPlan& plan);
};

RandomnessJ sample_randomness(const Topology& t, const LabelPlan& plan, Rng& rng);

/// Teleport labels and twirl bits for wire w.
TeleportParams wire_params(const Topology& t, const LabelPlan& plan, const RandomnessJ& J, int w);
/// Online encoding of a classical input bit: (u, l_z, l_x, v, data).
Bits classical_input_encoding(const Topology& t, const LabelPlan& plan, const RandomnessJ& J, int input, bool value);

enum class Backend { kExplicit, kCompressed };
std::string backend_name(Backend b);
Backend parse_backend(const std::string& s);

struct EncodeOptions {
    Backend backend = Backend::kCompressed;
    CreParams cre;
    uint64_t budget_bits = kDefaultBudgetBits;
    /// Input positions carried as classical bits; values may be set later.
    std::set<int> classical_positions;
    std::map<int, bool> classical_values;
    int qubit_cap = Tolerances::kPureQubitCap;
    int kappa_cap = 3;
    bool force_lazy = false;
};

struct EncodingBundle {
    struct Pending {
        enum class Kind { kInputTp, kGateEnc };
        Kind kind;
        int index;
    };

    Backend backend = Backend::kCompressed;
    Topology topo;
    LabelPlan plan;
    std::vector<Bits> offline;                      // per gate
    std::map<int, std::array<Bits, 4>> dict;        // per output wire: l_z0, l_z1, l_x0, l_x1
    std::map<int, Bits> classical_online;           // per classical input position
    std::map<int, std::pair<Bits, Bits>> measured;  // per wire, filled by dec
    QuantumState state;

    // Simulation internals: the recipe for quantum registers that are not
    // materialised yet, and what the compressed path needs to reproduce the
    // reduced map. Never consulted by the public view.
    std::vector<Pending> pending;
    std::vector<std::string> side;  // caller registers passed through untouched
    Circuit circuit;
    RandomnessJ J;
    std::set<int> classical_positions;

    std::string digest() const { return topo.digest(); }
};

/// Encoding with every input position present as in<i> (zero inputs included).
EncodingBundle enc_internal(const Circuit& c, const QuantumState& full_input, const RandomnessJ& J,
                            const EncodeOptions& opt);
/// Public entry: zero inputs are added as |0> here.
EncodingBundle enc(const Circuit& c, const QuantumState& input, const RandomnessJ& J, const EncodeOptions& opt);

struct DecodeOptions {
    /// Forces the teleport keys (d, e) measured on a wire; empty samples.
    std::function<std::pair<int, int>(int wire)> choose;
};

struct DecodeResult {
    QuantumState state;
    double prob = 1.0;  // probability of the chosen branch
    std::vector<std::pair<int, std::pair<Bits, Bits>>> label_log;
    int invalid_slots = 0;  // explicit backend: gadget slots that failed to parse
};

/// Consumes the bundle. Compressed backend throws IntegrityError when a
/// decoded gadget does not match the one the reduced map needs.
DecodeResult dec(EncodingBundle bundle, Rng& rng, const DecodeOptions& opt = {});

/// Simulator: encodes the identity-gate circuit of t on the output state y
/// (registers out<j> for kept j) routed back through the io bijection.
/// Classical positions must route to discarded outputs; their value
/// defaults to 0.
EncodingBundle sim(const Topology& t, const QuantumState& y, Rng& rng, const EncodeOptions& opt = {});

/// Live qubits of the explicit backend at its busiest step.
int explicit_peak_qubits(const Topology& t, const LabelPlan& plan, int base_qubits, bool eager);
/// Bits of one encoded correction gadget, saturating for planning.
uint64_t gadget_bits_saturating(uint64_t kappa);

// ---------------------------------------------------------------- bundle files

std::string write_bundle(const EncodingBundle& b);
EncodingBundle read_bundle(const std::string& text);

// ---------------------------------------------------------------- group-randomizing encoding

struct GrEncoding {
    QuantumState state;  // registers in<i>
    Tableau residual;
};

GrEncoding gr_encode(const Circuit& c, const QuantumState& x, Rng& rng);
GrEncoding gr_encode_with(const Circuit& c, const QuantumState& x, const Tableau& R);
/// Applies the residual and renames in<j> to out<j>.
QuantumState gr_decode(const GrEncoding& e);
GrEncoding gr_sim(const QuantumState& y, int n, Rng& rng);
GrEncoding gr_sim_with(const QuantumState& y, int n, const Tableau& E);

}  // namespace qgc

#endif
