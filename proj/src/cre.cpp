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

#include "qgc/cre.hpp"

#include <map>
#include <sstream>

namespace qgc {

namespace {

bool is_prg(const CreParams& p) { return p.mode == CreParams::Mode::kPrg; }

// Drops bit i (input 0 is the MSB of an n-bit position) and packs the rest.
uint64_t complement_index(uint64_t pos, int n, int i) {
    int shift = n - 1 - i;
    uint64_t low = pos & ((uint64_t{1} << shift) - 1);
    uint64_t high = pos >> (shift + 1);
    return (high << shift) | low;
}

int input_bit(uint64_t pos, int n, int i) { return int((pos >> (n - 1 - i)) & 1); }

// Key segment -> m_out-bit mask.
Bits pad_of(const Bits& segment, uint64_t m_out, const CreParams& p) {
    if (is_prg(p)) return prg_expand(segment, m_out);
    if (segment.empty()) return Bits(m_out);
    return segment.slice(0, m_out);
}

void check_inputs(int n_in) {
    if (n_in < 0 || n_in > kMaxCreInputs) {
        throw Error("CRE input count out of range: " + std::to_string(n_in));
    }
}

uint64_t segments_per_label(int n_in) { return n_in == 0 ? 0 : uint64_t{1} << (n_in - 1); }

// Offset of k_{i,b}[q] inside r.
uint64_t segment_offset(int n_in, int i, int b, uint64_t q, uint64_t L) {
    return uint64_t(n_in) + ((uint64_t(2 * i + b) * segments_per_label(n_in)) + q) * L;
}

}  // namespace

std::string CreParams::describe() const {
    if (is_prg(*this)) return "prg seed_bits=" + std::to_string(seed_bits);
    return "it segment_bits=" + (segment_bits < 0 ? std::string("m_out") : std::to_string(segment_bits));
}

FnSignature FnSignature::from_table(int n_in, uint64_t m_out, std::vector<Bits> table) {
    FnSignature f;
    f.n_in = n_in;
    f.m_out = m_out;
    f.table = std::move(table);
    f.validate();
    return f;
}

void FnSignature::validate() const {
    check_inputs(n_in);
    if (table.size() != (size_t{1} << n_in)) throw Error("truth table must have 2^n_in rows");
    for (const auto& row : table) {
        if (row.size() != m_out) throw Error("truth table row has the wrong width");
    }
}

bool CreEncoding::operator<(const CreEncoding& o) const {
    if (offline != o.offline) return offline < o.offline;
    if (labels.size() != o.labels.size()) return labels.size() < o.labels.size();
    for (size_t k = 0; k < labels.size(); k++) {
        if (labels[k] != o.labels[k]) return labels[k] < o.labels[k];
    }
    return false;
}

uint64_t segment_length(uint64_t m_out, const CreParams& p) {
    if (is_prg(p)) {
        if (p.seed_bits < 1) throw Error("PRG mode needs seed_bits >= 1");
        return uint64_t(p.seed_bits);
    }
    uint64_t sb = p.segment_bits < 0 ? m_out : uint64_t(p.segment_bits);
    if (sb == 0) return 0;
    return sat_mul((m_out + sb - 1) / sb, sb);
}

uint64_t label_length(int n_in, uint64_t m_out, const CreParams& p) {
    check_inputs(n_in);
    if (n_in == 0) return 0;
    return sat_add(sat_mul(segments_per_label(n_in), segment_length(m_out, p)), 1);
}

uint64_t randomness_length(int n_in, uint64_t m_out, const CreParams& p) {
    check_inputs(n_in);
    uint64_t segs = sat_mul(uint64_t(2 * n_in), segments_per_label(n_in));
    return sat_add(uint64_t(n_in), sat_mul(segs, segment_length(m_out, p)));
}

uint64_t csim_randomness_length(int n_in, uint64_t m_out, const CreParams& p) {
    check_inputs(n_in);
    uint64_t segs = sat_mul(uint64_t(n_in), segments_per_label(n_in));
    uint64_t rows = (uint64_t{1} << n_in) - 1;
    return sat_add(sat_add(uint64_t(n_in), sat_mul(segs, segment_length(m_out, p))), sat_mul(rows, m_out));
}

Bits cre_offline(const FnSignature& f, const Bits& r, const CreParams& p) {
    f.validate();
    const int n = f.n_in;
    if (r.size() < randomness_length(n, f.m_out, p)) throw Error("CRE randomness too short");
    const uint64_t L = segment_length(f.m_out, p);
    const uint64_t pi = n ? r.read_uint(0, n) : 0;
    Bits out;
    for (uint64_t pos = 0; pos < (uint64_t{1} << n); pos++) {
        uint64_t w = pos ^ pi;
        Bits row = f.table[w];
        for (int i = 0; i < n; i++) {
            uint64_t q = complement_index(pos, n, i);
            Bits seg = r.slice(segment_offset(n, i, input_bit(w, n, i), q, L), L);
            row ^= pad_of(seg, f.m_out, p);
        }
        out.append(row);
    }
    return out;
}

Bits cre_label(int n_in, uint64_t m_out, int i, bool b, const Bits& r, const CreParams& p) {
    check_inputs(n_in);
    if (i < 0 || i >= n_in) throw Error("CRE label index out of range");
    if (r.size() < randomness_length(n_in, m_out, p)) throw Error("CRE randomness too short");
    const uint64_t L = segment_length(m_out, p);
    Bits lab = r.slice(segment_offset(n_in, i, b, 0, L), segments_per_label(n_in) * L);
    lab.push_back(b ^ r.get(i));
    return lab;
}

std::vector<Bits> cre_labels(int n_in, uint64_t m_out, const Bits& r, const CreParams& p) {
    std::vector<Bits> out;
    for (int i = 0; i < n_in; i++) {
        for (int b = 0; b < 2; b++) out.push_back(cre_label(n_in, m_out, i, b, r, p));
    }
    return out;
}

CreEncoding cenc(const FnSignature& f, uint64_t x, const Bits& r, const CreParams& p) {
    CreEncoding e;
    e.offline = cre_offline(f, r, p);
    for (int i = 0; i < f.n_in; i++) e.labels.push_back(cre_label(f.n_in, f.m_out, i, input_bit(x, f.n_in, i), r, p));
    return e;
}

Bits cdec(int n_in, uint64_t m_out, const Bits& offline, const std::vector<Bits>& labels, const CreParams& p) {
    check_inputs(n_in);
    if (offline.size() != (uint64_t{1} << n_in) * m_out) throw IntegrityError("CRE offline string has the wrong length");
    if (int(labels.size()) != n_in) throw IntegrityError("CRE label count mismatch");
    const uint64_t len = label_length(n_in, m_out, p);
    const uint64_t L = segment_length(m_out, p);
    uint64_t pos = 0;
    for (int i = 0; i < n_in; i++) {
        if (labels[i].size() != len) throw IntegrityError("CRE label has the wrong length");
        pos = (pos << 1) | uint64_t(labels[i].get(len - 1));
    }
    Bits row = offline.slice(pos * m_out, m_out);
    for (int i = 0; i < n_in; i++) {
        uint64_t q = complement_index(pos, n_in, i);
        row ^= pad_of(labels[i].slice(q * L, L), m_out, p);
    }
    return row;
}

CreEncoding csim_from_bits(int n_in, const Bits& y, const Bits& rho, const CreParams& p) {
    check_inputs(n_in);
    const uint64_t m_out = y.size();
    if (rho.size() < csim_randomness_length(n_in, m_out, p)) throw Error("CRE simulator randomness too short");
    const uint64_t L = segment_length(m_out, p);
    const uint64_t S = segments_per_label(n_in);
    CreEncoding e;
    uint64_t pos = n_in ? rho.read_uint(0, n_in) : 0;
    uint64_t off = n_in;
    for (int i = 0; i < n_in; i++) {
        Bits lab = rho.slice(off, S * L);
        off += S * L;
        lab.push_back(input_bit(pos, n_in, i));
        e.labels.push_back(lab);
    }
    for (uint64_t row = 0; row < (uint64_t{1} << n_in); row++) {
        if (row != pos) {
            e.offline.append(rho.slice(off, m_out));
            off += m_out;
            continue;
        }
        Bits v = y;
        for (int i = 0; i < n_in; i++) {
            uint64_t q = complement_index(pos, n_in, i);
            v ^= pad_of(e.labels[i].slice(q * L, L), m_out, p);
        }
        e.offline.append(v);
    }
    return e;
}

CreEncoding csim(int n_in, const Bits& y, Rng& rng, const CreParams& p) {
    return csim_from_bits(n_in, y, rng.bits(csim_randomness_length(n_in, y.size(), p)), p);
}

bool cre_privacy_exhaustive(const FnSignature& f, uint64_t x, const CreParams& p, int max_log2) {
    f.validate();
    const uint64_t nr = randomness_length(f.n_in, f.m_out, p);
    const uint64_t ns = csim_randomness_length(f.n_in, f.m_out, p);
    if (nr > uint64_t(max_log2) || ns > uint64_t(max_log2)) throw Error("randomness too long for exhaustive enumeration");
    auto bits_of = [](uint64_t v, uint64_t n) {
        Bits b(n);
        for (uint64_t k = 0; k < n; k++) b.set(k, (v >> k) & 1);
        return b;
    };
    std::map<CreEncoding, uint64_t> real, sim;
    for (uint64_t v = 0; v < (uint64_t{1} << nr); v++) real[cenc(f, x, bits_of(v, nr), p)]++;
    const Bits y = f.table[x];
    for (uint64_t v = 0; v < (uint64_t{1} << ns); v++) sim[csim_from_bits(f.n_in, y, bits_of(v, ns), p)]++;
    if (real.size() != sim.size()) return false;
    // Same support, and count ratios match the ratio of the totals.
    const uint64_t tr = uint64_t{1} << nr, ts = uint64_t{1} << ns;
    for (auto it = real.begin(), jt = sim.begin(); it != real.end(); ++it, ++jt) {
        if (!(it->first == jt->first)) return false;
        if (it->second * ts != jt->second * tr) return false;
    }
    return true;
}

Bits prg_expand(const Bits& seed, uint64_t out_len) {
    Bits out(out_len);
    uint64_t key = splitmix64(seed.hash() ^ 0x7067726b6579ULL);
    for (uint64_t blk = 0; blk * 64 < out_len; blk++) {
        uint64_t w = splitmix64(key + blk * 0x9e3779b97f4a7c15ULL);
        for (uint64_t j = 0; j < 64 && blk * 64 + j < out_len; j++) out.set(blk * 64 + j, (w >> j) & 1);
    }
    return out;
}

std::string cre_serialize(const CreEncoding& e, int n_in, uint64_t m_out, const CreParams& p) {
    std::ostringstream os;
    os << "qgc-cre v1\n";
    os << "sig " << n_in << " " << m_out << "\n";
    os << "params " << p.describe() << "\n";
    os << "offline " << e.offline.size() << " " << e.offline.to_hex() << "\n";
    for (size_t i = 0; i < e.labels.size(); i++) {
        os << "label " << i << " " << e.labels[i].size() << " " << e.labels[i].to_hex() << "\n";
    }
    return os.str();
}

CreEncoding cre_parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "qgc-cre v1") throw ParseError("expected 'qgc-cre v1' header");
    CreEncoding e;
    int n_in = -1;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "sig") {
            ls >> n_in;
        } else if (kw == "offline" || kw == "label") {
            size_t idx = 0, nbits = 0;
            std::string hex;
            if (kw == "label") ls >> idx;
            ls >> nbits;
            if (nbits > 0) ls >> hex;
            if (!ls) throw ParseError("malformed CRE line: " + line);
            Bits b = Bits::from_hex(hex, nbits);
            if (kw == "offline") {
                e.offline = b;
            } else {
                if (idx != e.labels.size()) throw ParseError("CRE labels out of order");
                e.labels.push_back(b);
            }
        } else if (kw == "params" || kw.empty()) {
            continue;
        } else {
            throw ParseError("unknown CRE line: " + line);
        }
    }
    if (n_in >= 0 && int(e.labels.size()) != n_in) throw ParseError("CRE label count does not match signature");
    return e;
}

}  // namespace qgc
