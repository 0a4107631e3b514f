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

#ifndef QGC_GADGETS_HPP
#define QGC_GADGETS_HPP

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qgc/common.hpp"
#include "qgc/cre.hpp"
#include "qgc/groups.hpp"
#include "qgc/qstate.hpp"

namespace qgc {

// Gadget circuits are gate lists over symbolic registers:
//   u (1), z (kappa), x (kappa), v (1), b ((kappa+1)^2), up (1, data out).
// b_ij sits at offset i * (kappa + 1) + j. Row 0 of b holds copies of u,
// row j >= 1 holds copies of z_j (z offset j - 1).

struct GateOp {
    enum class Kind { kUnitary, kFanOut, kParity };
    Kind kind = Kind::kUnitary;
    std::string name;
    GateMatrix m;
    // Unitary: targets. Fan-out: control then targets. Parity: target then controls.
    std::vector<QubitAddr> qubits;

    static GateOp unitary(std::string name, GateMatrix m, std::vector<QubitAddr> q);
    static GateOp fanout(QubitAddr control, std::vector<QubitAddr> targets);
    static GateOp parity(QubitAddr target, std::vector<QubitAddr> controls);
};
using GateList = std::vector<GateOp>;

/// Maps gadget register names to state register names; unmapped names pass through.
using RegisterBinding = std::map<std::string, std::string>;

void apply_gate_list(QuantumState& s, const GateList& gl, const RegisterBinding& bind = {});
std::string print_gate_list(const GateList& gl);
/// Greedy layer count; a fan-out or parity gate is one layer.
int gate_list_depth(const GateList& gl);

QubitAddr b_qubit(int kappa, int i, int j);
RegisterMap gadget_registers(int kappa, bool with_b, bool with_up);

struct TeleportParams {
    Bits lz0, lz1, lx0, lx1;
    int sz = 0, sx = 0, tz = 0, tx = 0;

    int kappa() const { return int(lz0.size()); }
    void validate() const;
    const Bits& z_label(int d) const { return d ? lz1 : lz0; }
    const Bits& x_label(int e) const { return e ? lx1 : lx0; }
    static TeleportParams sample(int kappa, Rng& rng);
    static TeleportParams from_labels(Bits lz0, Bits lz1, Bits lx0, Bits lx1, int sz, int sx, int tz, int tx);
};

/// Teleportation gadget on (u, z, x, v).
GateList tp_circuit(const TeleportParams& p);
/// Pre-measured variant on (u, z, x, v, up); X and CNOT only.
GateList classical_tp_circuit(const TeleportParams& p);

struct ClassicalTpOutput {
    bool u = false;
    Bits z, x;
    bool v = false;
    bool up = false;
};
/// Evaluates the classical gadget on input bit y with pre-measured EPR bit r.
ClassicalTpOutput classical_tp_eval(const TeleportParams& p, bool y, bool r);

/// Decomposition pieces on (u, z, b).
GateList c1(const Bits& r);
RandomizerElement c2(const PXElement& R, const Bits& r, int sz, int sx);
GateList c3(int kappa);
/// CZ pairs of the phase fix-up, as b qubits.
std::vector<std::pair<QubitAddr, QubitAddr>> gamma(bool p, const Bits& r);

/// Decomposition of TP * R into Lambda3 * Lambda2 * Lambda1 on (u, z, x, v, b).
GateList lambda1(const TeleportParams& p);
RandomizerElement lambda2(const PXElement& R, const TeleportParams& p);
GateList lambda3(int kappa);

/// A randomizer element as a depth-one gate list on (u, z, x, v, b).
GateList randomizer_circuit(const RandomizerElement& e);

RandomizerElement corr_gadget(const RandomizerElement& A, const PXElement& R, const TeleportParams& p);

/// 32-bit big-endian bit count followed by the randomizer encoding.
size_t gadget_encoding_length(int kappa);
Bits encode_gadget(const RandomizerElement& e);
RandomizerElement parse_corr(const Bits& bits, int kappa);
/// Never throws on content; invalid slots become identity and are counted.
RandomizerElement parse_corr_lenient(const Bits& bits, int kappa, int* invalid_slots);

/// Per-qubit corrections R_j that undo the Pauli key pushed through g.
/// zx lists (z_1, x_1, ..., z_p, x_p) with z_1 as the most significant bit.
std::vector<PXElement> correction_residues(const UniversalGate& g, uint64_t zx);
FnSignature correction_fn(const UniversalGate& g, const std::vector<RandomizerElement>& A,
                          const std::vector<TeleportParams>& tp);

struct TeleportOutcome {
    int d = 0, e = 0;
    Bits z_label, x_label;
    double prob = 0.0;
};
/// Applies X^e Z^d to the data register with (d, e) uniform, or forced.
TeleportOutcome compressed_teleport(QuantumState& s, const std::string& data_reg, const TeleportParams& p, Rng* rng,
                                    std::optional<std::pair<int, int>> forced = std::nullopt);

/// Sparse pure state for gate lists whose support stays small.
class SparseState {
   public:
    explicit SparseState(RegisterMap regs);
    static SparseState basis(RegisterMap regs, uint64_t index);
    void apply(const GateOp& g);
    void apply(const GateList& gl) {
        for (const auto& g : gl) apply(g);
    }
    const RegisterMap& regs() const { return regs_; }
    const std::unordered_map<uint64_t, cd>& amps() const { return amps_; }
    cd amplitude(uint64_t index) const;
    /// Bit mask of a flat qubit in the index.
    uint64_t mask(const QubitAddr& a) const;

   private:
    RegisterMap regs_;
    std::unordered_map<uint64_t, cd> amps_;
};

/// Phase-aligned Frobenius distance between two gate lists restricted to
/// inputs with the `ancilla` registers in |0>.
double gate_list_distance(const RegisterMap& regs, const GateList& lhs, const GateList& rhs,
                          const std::vector<std::string>& ancilla);

double lambda_identity_distance(const PXElement& R, const TeleportParams& p);
double c_identity_distance(const PXElement& R, const Bits& r, int sz, int sx);
/// Checks that P on u before the parity equals the P, P^r and CZ fix-up after
/// it, amplitude for amplitude, on every computational input.
bool gamma_phase_law(const Bits& r);

}  // namespace qgc

#endif
