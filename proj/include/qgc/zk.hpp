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

#ifndef QGC_ZK_HPP
#define QGC_ZK_HPP

#include <array>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qgc/qgc.hpp"

namespace qgc::zk {

// ---------------------------------------------------------------- toy commitment
//
// c = (mix(s), m ^ expand(s)) over 128-bit blocks. mix is a Feistel network,
// so it is a bijection and the scheme is perfectly binding. Hiding rests on
// nothing: this is a stand-in, not cryptography.

using Block = std::array<uint64_t, 2>;

Block mix(const Block& s);
Block unmix(const Block& c);
Block expand(const Block& s);

struct Commitment {
    Block head, body;
    bool operator==(const Commitment& o) const { return head == o.head && body == o.body; }
};

Commitment commit(const Block& m, const Block& s);
bool verify(const Commitment& c, const Block& m, const Block& s);

/// Bit strings are committed block by block, zero padded.
struct BitsCommitment {
    uint64_t nbits = 0;
    std::vector<Commitment> blocks;
};
struct BitsOpening {
    Bits message;
    std::vector<Block> randomness;
};

BitsCommitment commit_bits(const Bits& m, Rng& rng, BitsOpening* opening);
bool verify_bits(const BitsCommitment& c, const BitsOpening& o);

// ---------------------------------------------------------------- instances

/// Verifier circuit wrapped with the one-time pad on the witness. Input
/// positions: x in [0, n), pad X bits in [n, n+m), pad Z bits in [n+m, n+2m),
/// padded witness in [n+2m, n+3m), then any zero ancillas.
struct QmaInstance {
    std::string name;
    int n = 1;
    int m = 1;
    Circuit F;
    int accept_output = 0;

    std::set<int> classical_positions() const;
    int x_pos(int i) const { return i; }
    int u_pos(int k) const { return n + k; }
    int v_pos(int k) const { return n + m + k; }
    int witness_pos(int k) const { return n + 2 * m + k; }
};

/// Accepts iff the witness is |+>: the wrapped check is H then X.
QmaInstance plus_witness_instance();
/// Outputs a fresh |0> whatever the witness.
QmaInstance always_reject_instance();
QmaInstance instance_by_name(const std::string& name);

/// Witness register for a one-qubit |+>.
QuantumState plus_witness();

// ---------------------------------------------------------------- protocol

enum class Adversary { kHonest, kWrongGate, kLabelSwap, kOutputFlip, kEquivocate };
std::string adversary_name(Adversary a);
Adversary parse_adversary(const std::string& s);

struct ZkConfig {
    CreParams cre = CreParams::prg(8);
    uint64_t budget_bits = kDefaultBudgetBits;
};

/// First message. The bundle's quantum state also carries the prover's
/// halves of the witness EPR pairs as side registers "prover.e1.<k>"; the
/// prover acts on them in round three.
struct Message1 {
    EncodingBundle bundle;
    BitsCommitment c_r;
    std::vector<std::array<BitsCommitment, 2>> c_labels;  // per classical position
};

struct ProverState {
    Adversary adv = Adversary::kHonest;
    BitsOpening open_r;
    std::vector<int> positions;  // classical positions, ascending
    std::vector<std::array<BitsOpening, 2>> open_labels;
};

struct Message3 {
    int b = 0;
    // b = 0: everything is opened.
    BitsOpening r;
    std::vector<std::array<BitsOpening, 2>> all_labels;
    // b = 1: one opening per classical position, for the bit in z.
    std::vector<int> z;
    std::vector<BitsOpening> chosen;
};

struct Verdict {
    bool accept = false;
    std::string reason;
    uint64_t scratch_weight = 0;  // b = 0: nonzero bits left by the inverse check
};

std::pair<Message1, ProverState> prover_round1(const QmaInstance& inst, const ZkConfig& cfg, Adversary adv, Rng& rng);
int verifier_challenge(Rng& rng);
/// Delayed input: x and the witness arrive only here.
Message3 prover_round3(ProverState& st, Message1& msg1, int b, const Bits& x, const QuantumState& witness, Rng& rng);
Verdict verifier_decide(const QmaInstance& inst, const ZkConfig& cfg, const Bits& x, Message1& msg1, const Message3& msg3,
                        Rng& rng);

struct Transcript {
    Message1 msg1;
    int b = 0;
    Message3 msg3;
    Verdict verdict;
};

/// Full honest-verifier run (the challenge is uniform).
Transcript run_protocol(const QmaInstance& inst, const ZkConfig& cfg, Adversary adv, const Bits& x,
                        const QuantumState& witness, Rng& rng, std::optional<int> force_b = std::nullopt);

/// JSON with named sections and hex payloads.
std::string transcript_json(const Transcript& t);

// ---------------------------------------------------------------- simulator

using ChallengeOracle = std::function<int(const Message1&)>;

struct SimResult {
    bool abort = false;
    int guess = 0;
    std::optional<Transcript> transcript;
};

/// One attempt: guess the challenge, build a first message that can be
/// answered for that guess without a witness, abort on a wrong guess.
SimResult zksim0(const QmaInstance& inst, const ZkConfig& cfg, const ChallengeOracle& vstar, const Bits& x, Rng& rng);

/// Bell-measurement keys (X exponent, Z exponent) of teleporting the witness,
/// counted over runs; cell index is 2 * u + v.
std::vector<uint64_t> witness_key_counts(const QuantumState& witness, int runs, Rng& rng);

}  // namespace qgc::zk

#endif
