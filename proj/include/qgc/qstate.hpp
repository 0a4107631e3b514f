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

#ifndef QGC_QSTATE_HPP
#define QGC_QSTATE_HPP

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qgc/common.hpp"

namespace qgc {

using cd = std::complex<double>;

/// Public qubit address: register name plus offset inside it.
struct QubitAddr {
    std::string reg;
    int offset = 0;
    bool operator==(const QubitAddr& o) const { return reg == o.reg && offset == o.offset; }
};

/// Ordered list of named registers. The first qubit of the first register is
/// the most significant bit of a basis index.
class RegisterMap {
   public:
    RegisterMap() = default;
    RegisterMap(std::initializer_list<std::pair<std::string, int>> entries);

    void add(const std::string& name, int width);
    int total() const { return total_; }
    size_t size() const { return entries_.size(); }
    const std::vector<std::pair<std::string, int>>& entries() const { return entries_; }
    bool has(const std::string& name) const;
    int width(const std::string& name) const;
    /// Flat index of the first qubit of the register.
    int start(const std::string& name) const;
    int flat(const QubitAddr& a) const;
    std::vector<std::string> names() const;
    bool operator==(const RegisterMap& o) const { return entries_ == o.entries_; }
    bool operator!=(const RegisterMap& o) const { return !(*this == o); }
    std::string describe() const;

   private:
    std::vector<std::pair<std::string, int>> entries_;
    int total_ = 0;
};

/// A dense unitary on 1 or more qubits. Row index: first target is the MSB.
struct GateMatrix {
    int arity = 1;
    std::vector<cd> m;

    static GateMatrix from_rows(int arity, std::vector<cd> entries);
    size_t dim() const { return size_t{1} << arity; }
    cd at(size_t r, size_t c) const { return m[r * dim() + c]; }
    GateMatrix adjoint() const;
    GateMatrix operator*(const GateMatrix& o) const;
    /// Kronecker product, this on the more significant qubits.
    GateMatrix kron(const GateMatrix& o) const;
    bool is_unitary(double tol = Tolerances::kNorm) const;
    /// Max-abs entry difference after aligning global phase.
    double phase_distance(const GateMatrix& o) const;
};

namespace gates {
GateMatrix I();
GateMatrix X();
/// The Y convention used throughout: [[0, i], [-i, 0]].
GateMatrix Y();
GateMatrix Z();
GateMatrix H();
GateMatrix P();
GateMatrix T();
GateMatrix CNOT();
GateMatrix CZ();
GateMatrix SWAP();
}  // namespace gates

/// One register initializer for make_state.
struct RegisterInit {
    enum class Kind { kZeros, kEpr, kAmplitudes };
    Kind kind = Kind::kZeros;
    std::string name;
    std::string partner;
    std::vector<cd> amplitudes;

    static RegisterInit zeros(std::string name) { return {Kind::kZeros, std::move(name), {}, {}}; }
    static RegisterInit epr(std::string a, std::string b) { return {Kind::kEpr, std::move(a), std::move(b), {}}; }
    static RegisterInit amps(std::string name, std::vector<cd> a) {
        return {Kind::kAmplitudes, std::move(name), {}, std::move(a)};
    }
};

struct MeasureResult;

/// Named-register pure state or density operator.
///
/// Values own their data; copies are independent. The mutating methods are
/// the engine used by the pipeline, the free functions below are the pure
/// value-returning interface.
class QuantumState {
   public:
    QuantumState() = default;
    static QuantumState zeros(const RegisterMap& regs);
    static QuantumState from_amplitudes(const RegisterMap& regs, std::vector<cd> amps);
    static QuantumState from_density(const RegisterMap& regs, std::vector<cd> rho);

    bool is_pure() const { return pure_; }
    int num_qubits() const { return regs_.total(); }
    size_t dim() const { return size_t{1} << regs_.total(); }
    const RegisterMap& regs() const { return regs_; }
    /// Amplitudes (pure) or row-major density entries.
    const std::vector<cd>& data() const { return data_; }
    cd amplitude(size_t i) const { return data_[i]; }
    cd rho(size_t r, size_t c) const { return data_[r * dim() + c]; }

    void apply(const GateMatrix& g, const std::vector<QubitAddr>& targets);
    void apply_flat(const GateMatrix& g, const std::vector<int>& flat);
    /// Flips every target when the control is 1.
    void fanout(const QubitAddr& control, const std::vector<QubitAddr>& targets);
    /// target ^= xor of controls.
    void parity(const QubitAddr& target, const std::vector<QubitAddr>& controls);

    /// Born-rule measurement of targets. With `forced`, the outcome is fixed
    /// (replay mode) and a zero-probability outcome throws.
    MeasureResult measure(const std::vector<QubitAddr>& targets, Rng* rng, const Bits* forced = nullptr);
    /// Measures whole registers, then removes them from the state.
    MeasureResult measure_and_remove(const std::vector<std::string>& regs, Rng* rng,
                                     const Bits* forced = nullptr);

    void add_zeros(const std::string& name, int width);
    void add_epr(const std::string& a, const std::string& b);
    void rename(const std::string& from, const std::string& to);
    QuantumState reordered(const std::vector<std::string>& order) const;
    QuantumState to_density() const;
    double norm() const;
    /// Checks the representation invariants; throws on violation.
    void validate() const;

   private:
    void check_caps() const;
    std::vector<int> flat_targets(const std::vector<QubitAddr>& targets) const;
    void permute_flip(const std::vector<int>& flat_control, const std::vector<int>& flat_targets, bool parity_mode);

    RegisterMap regs_;
    bool pure_ = true;
    std::vector<cd> data_;
};

struct MeasureResult {
    Bits outcome;
    double prob = 0.0;
};

// Value-returning interface.
QuantumState make_state(const RegisterMap& regs, const std::vector<RegisterInit>& inits);
QuantumState apply_unitary(QuantumState s, const GateMatrix& g, const std::vector<QubitAddr>& targets);
std::pair<MeasureResult, QuantumState> measure(QuantumState s, const std::vector<QubitAddr>& targets, Rng* rng,
                                               const Bits* forced = nullptr);
QuantumState partial_trace(const QuantumState& s, const std::vector<std::string>& keep);
double trace_distance(const QuantumState& a, const QuantumState& b);
/// |<a|b>|^2 for pure states, tr(rho sigma) style overlap otherwise.
double fidelity(const QuantumState& a, const QuantumState& b);
QuantumState tensor(const QuantumState& a, const QuantumState& b);
/// Convex combination sum_k w_k s_k in density form.
QuantumState mixture(const std::vector<std::pair<double, QuantumState>>& parts);

std::string dump_state(const QuantumState& s);
QuantumState parse_state(const std::string& text);

}  // namespace qgc

#endif
