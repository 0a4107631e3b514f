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

#ifndef QGC_GROUPS_HPP
#define QGC_GROUPS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qgc/common.hpp"
#include "qgc/qstate.hpp"

namespace qgc {

/// i^c X^a P^b with c, b mod 4 and a a bit. Z is folded in as P^2.
struct PXElement {
    int c = 0;
    int a = 0;
    int b = 0;

    static PXElement identity() { return {}; }
    static PXElement make(int c, int a, int b);
    GateMatrix matrix() const;
    PXElement operator*(const PXElement& o) const;
    PXElement inverse() const;
    bool operator==(const PXElement& o) const { return c == o.c && a == o.a && b == o.b; }
    /// Same element up to global phase.
    bool same_coset(const PXElement& o) const { return a == o.a && b == o.b; }
    // Up to phase, the element is X^x_bit Z^z_bit P^p_bit.
    int x_bit() const { return a; }
    int z_bit() const { return (b >> 1) & 1; }
    int p_bit() const { return b & 1; }
    std::string str() const;
};

/// Canonical form of the ordered matrix product seq[0]·seq[1]·...
/// Accepted names: I, X, Z, P.
PXElement px_normalize(const std::vector<std::string>& seq);

/// Pauli operator i^phase · (X^x)(Z^z) on up to 32 qubits. Qubit 0 is the
/// most significant tensor factor. Hermitian Paulis use Y = iXZ per qubit.
struct Pauli {
    uint32_t x = 0;
    uint32_t z = 0;
    uint8_t phase = 0;

    static Pauli x_on(int q) { return {uint32_t{1} << q, 0, 0}; }
    static Pauli z_on(int q) { return {0, uint32_t{1} << q, 0}; }
    /// (-1)^sign times the Hermitian Pauli with the given bits.
    static Pauli hermitian(uint32_t x, uint32_t z, bool sign);
    Pauli operator*(const Pauli& o) const;
    bool commutes(const Pauli& o) const;
    bool is_hermitian() const;
    /// Sign bit of a Hermitian Pauli.
    bool sign() const;
    bool is_identity_mod_phase() const { return x == 0 && z == 0; }
    bool operator==(const Pauli& o) const { return x == o.x && z == o.z && (phase & 3) == (o.phase & 3); }
    GateMatrix matrix(int n) const;
    std::string str(int n) const;
};
using PauliWord = Pauli;

/// Clifford gate names used by synthesis output.
struct CliffordGate {
    enum class Kind { kH, kP, kCNOT };
    Kind kind;
    int q0;
    int q1 = -1;
    bool operator==(const CliffordGate& o) const { return kind == o.kind && q0 == o.q0 && q1 == o.q1; }
};

/// Clifford tableau modulo global phase: images of X_i and Z_i.
class Tableau {
   public:
    static constexpr int kMaxQubits = 6;

    Tableau() : Tableau(1) {}
    explicit Tableau(int n);
    int n() const { return n_; }
    const Pauli& x_image(int i) const { return img_[2 * i]; }
    const Pauli& z_image(int i) const { return img_[2 * i + 1]; }
    void set_images(int i, const Pauli& xi, const Pauli& zi) {
        img_[2 * i] = xi;
        img_[2 * i + 1] = zi;
    }

    Pauli conjugate(const Pauli& p) const;
    /// (a*b) acts as b first, then a.
    friend Tableau operator*(const Tableau& a, const Tableau& b);
    Tableau inverse() const;
    bool is_valid() const;
    bool operator==(const Tableau& o) const;
    bool operator!=(const Tableau& o) const { return !(*this == o); }
    std::string key() const;

    // Append a gate after the current map: U <- G U.
    void h(int q);
    void s(int q);
    void cx(int c, int t);
    void cz(int a, int b);
    void swap(int a, int b);
    void append(const Tableau& local, const std::vector<int>& qubits);

    static Tableau from_gates(int n, const std::vector<CliffordGate>& gates);
    GateMatrix matrix() const;

   private:
    int n_;
    std::array<Pauli, 2 * kMaxQubits> img_{};
};

/// Circuit over {H, P, CNOT} whose tableau equals t. Length <= kSynthesisConstant * n^2.
std::vector<CliffordGate> clifford_to_canonical_circuit(const Tableau& t);
constexpr int kSynthesisConstant = 16;

Pauli tableau_conjugate(const Tableau& t, const Pauli& p);
Tableau sample_clifford(int n, Rng& rng);

/// The 24 single-qubit Cliffords. Index = 4*ix + k where ix walks the X-image
/// list [+X,-X,+Y,-Y,+Z,-Z] and k walks the anticommuting Z-images in the
/// same list order.
namespace clifford1 {
constexpr int kCount = 24;
const Tableau& tableau(int index);
const GateMatrix& matrix(int index);
int index_of(const Tableau& t);
int compose(int a, int b);
int inverse(int a);
int identity();
/// Index of the Clifford equal (up to phase) to the given 2x2 matrix, or -1.
int from_matrix(const GateMatrix& m);
}  // namespace clifford1

/// Universal-set gate: a Clifford on 1 or 2 qubits, or T.
struct UniversalGate {
    std::string name;
    int arity = 1;
    bool is_t = false;
    Tableau clifford{1};

    GateMatrix matrix() const;
    static UniversalGate named(const std::string& name);
    static UniversalGate clifford2(const Tableau& t);
    /// Identity of the given arity ("I" or the identity clifford2 code).
    static UniversalGate identity(int arity);
    /// Parses a gate name as written in circuit files.
    static UniversalGate parse(const std::string& name);
    bool operator==(const UniversalGate& o) const;
};

/// U·p = omega^k (R_1 ⊗ ... ⊗ R_p)·U with omega = e^{i pi/4}.
struct PushResult {
    std::vector<PXElement> r;
    int omega_power = 0;
};
PushResult pauli_pushthrough(const UniversalGate& g, const Pauli& p);

/// Element of the randomization group at label length kappa.
///
/// Slot order (fixed wire format): u, z_1..z_k, x_1..x_k, v, b_00..b_kk (the
/// diagonal), then pairs (b_ij, b_ji) for i < j in lexicographic order. The b
/// register is row-major, b_ij at offset i*(k+1)+j.
struct RandomizerElement {
    int kappa = 1;
    std::vector<uint8_t> singles;
    std::vector<Tableau> pairs;

    static RandomizerElement identity(int kappa);
    bool operator==(const RandomizerElement& o) const;
    static int num_singles(int kappa) { return 3 * kappa + 3; }
    static int num_pairs(int kappa) { return kappa * (kappa + 1) / 2; }
    static size_t encoded_bits(int kappa);
    // Slot indices.
    static int slot_u() { return 0; }
    static int slot_z(int /*kappa*/, int j) { return 1 + j; }
    static int slot_x(int kappa, int j) { return 1 + kappa + j; }
    static int slot_v(int kappa) { return 1 + 2 * kappa; }
    static int slot_bdiag(int kappa, int i) { return 2 + 2 * kappa + i; }
    static int pair_index(int kappa, int i, int j);
};

RandomizerElement sample_randomizer(int kappa, Rng& rng);
Bits randomizer_encode(const RandomizerElement& e);
RandomizerElement randomizer_decode(const Bits& bits, int kappa);
/// Decodes, mapping invalid slots to identity. Returns the number of invalid slots.
RandomizerElement randomizer_decode_lenient(const Bits& bits, int kappa, int* invalid_slots);
/// a*b: b acts first.
RandomizerElement randomizer_compose(const RandomizerElement& a, const RandomizerElement& b);
RandomizerElement randomizer_inverse(const RandomizerElement& a);

/// 20-bit encoding of a two-qubit tableau: four 4-bit images (x0 z0 x1 z1) of
/// X0, Z0, X1, Z1, then their four sign bits.
uint32_t clifford2_encode(const Tableau& t);
bool clifford2_decode(uint32_t code, Tableau* out);

}  // namespace qgc

#endif
