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

#ifndef QGC_CRE_HPP
#define QGC_CRE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qgc/common.hpp"

namespace qgc {

// Selector-table decomposable randomized encoding.
//
// Each input i has a permute bit pi_i. The offline table lists the rows in
// pointer order P = w ^ pi; row P is f(w) masked by one key segment per input,
// k_{i, w_i}[P without bit i]. The label for (i, b) carries every segment
// k_{i,b}[.] plus the pointer b ^ pi_i. A key segment masks exactly one row,
// so the rows the evaluator cannot address stay uniformly random.
//
// A plain one-time-pad table with one key per (i, b) would reuse keys across
// rows and leak row XORs; the per-row segments are what make the encoding
// perfectly private.

struct CreParams {
    enum class Mode { kInformationTheoretic, kPrg };
    Mode mode = Mode::kInformationTheoretic;
    /// Key bits per masked payload group; -1 means "use m_out".
    int segment_bits = -1;
    /// Seed length of a segment in PRG mode.
    int seed_bits = 16;

    static CreParams prg(int seed_bits) {
        CreParams p;
        p.mode = Mode::kPrg;
        p.seed_bits = seed_bits;
        return p;
    }
    static CreParams with_segments(int bits) {
        CreParams p;
        p.segment_bits = bits;
        return p;
    }
    std::string describe() const;
};

constexpr int kMaxCreInputs = 8;

/// A function given by its truth table. Row w lists f(w) with input 0 as
/// the most significant bit of w.
struct FnSignature {
    int n_in = 0;
    uint64_t m_out = 0;
    std::vector<Bits> table;

    static FnSignature from_table(int n_in, uint64_t m_out, std::vector<Bits> table);
    void validate() const;
};

struct CreEncoding {
    Bits offline;
    std::vector<Bits> labels;  // one per input
    bool operator==(const CreEncoding& o) const { return offline == o.offline && labels == o.labels; }
    bool operator<(const CreEncoding& o) const;
};

/// Key-segment length L for a function with m_out output bits.
uint64_t segment_length(uint64_t m_out, const CreParams& p);
/// 2^(n_in-1) * L + 1, or 0 for n_in = 0. Saturates at UINT64_MAX.
uint64_t label_length(int n_in, uint64_t m_out, const CreParams& p);
uint64_t randomness_length(int n_in, uint64_t m_out, const CreParams& p);
uint64_t csim_randomness_length(int n_in, uint64_t m_out, const CreParams& p);

/// Offline string; depends on the table and r only.
Bits cre_offline(const FnSignature& f, const Bits& r, const CreParams& p);
/// Label for input i and value b; independent of the table contents.
Bits cre_label(int n_in, uint64_t m_out, int i, bool b, const Bits& r, const CreParams& p);
/// All 2 n_in labels, index 2 i + b.
std::vector<Bits> cre_labels(int n_in, uint64_t m_out, const Bits& r, const CreParams& p);
CreEncoding cenc(const FnSignature& f, uint64_t x, const Bits& r, const CreParams& p);
Bits cdec(int n_in, uint64_t m_out, const Bits& offline, const std::vector<Bits>& labels, const CreParams& p);

/// Simulated encoding of output y from explicit randomness bits.
CreEncoding csim_from_bits(int n_in, const Bits& y, const Bits& rho, const CreParams& p);
CreEncoding csim(int n_in, const Bits& y, Rng& rng, const CreParams& p);

/// Enumerates every randomness string for cenc(f, x) and csim(f(x)) and
/// compares the two output distributions as normalized multisets. Throws
/// when either randomness length exceeds max_log2 bits.
bool cre_privacy_exhaustive(const FnSignature& f, uint64_t x, const CreParams& p, int max_log2 = 22);

/// Toy counter-mode expansion. Deterministic, no security claim.
Bits prg_expand(const Bits& seed, uint64_t out_len);

std::string cre_serialize(const CreEncoding& e, int n_in, uint64_t m_out, const CreParams& p);
CreEncoding cre_parse(const std::string& text);

}  // namespace qgc

#endif
