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

#include <gtest/gtest.h>

#include <map>

#include "qgc/cre.hpp"

using namespace qgc;

namespace {

FnSignature two_input(int a, int b, int c, int d) {
    return FnSignature::from_table(2, 1, {Bits::from_uint(a, 1), Bits::from_uint(b, 1), Bits::from_uint(c, 1),
                                          Bits::from_uint(d, 1)});
}

FnSignature random_fn(int n, uint64_t m, Rng& rng) {
    std::vector<Bits> t;
    for (int w = 0; w < (1 << n); w++) t.push_back(rng.bits(m));
    return FnSignature::from_table(n, m, t);
}

Bits decode(const FnSignature& f, uint64_t x, const Bits& r, const CreParams& p) {
    CreEncoding e = cenc(f, x, r, p);
    return cdec(f.n_in, f.m_out, e.offline, e.labels, p);
}

}  // namespace

TEST(cre, label_length_examples) {
    CreParams p;
    EXPECT_EQ(label_length(2, 10, p), 21u);
    EXPECT_EQ(label_length(1, 1, p), 2u);
    EXPECT_EQ(label_length(0, 5, p), 0u);
    EXPECT_EQ(label_length(2, 10, CreParams::with_segments(3)), 2u * 12 + 1);
    EXPECT_EQ(label_length(3, 7, CreParams::with_segments(0)), 1u);
    EXPECT_EQ(label_length(3, 1000, CreParams::prg(8)), 4u * 8 + 1);

    Rng rng(5);
    FnSignature f = random_fn(2, 10, rng);
    Bits r = rng.bits(randomness_length(2, 10, p));
    for (const Bits& lab : cre_labels(2, 10, r, p)) EXPECT_EQ(lab.size(), 21u);
    EXPECT_EQ(cre_offline(f, r, p).size(), 40u);
}

TEST(cre, small_functions) {
    Rng rng(11);
    CreParams p;
    Bits r = rng.bits(randomness_length(2, 1, p));
    EXPECT_EQ(decode(two_input(0, 0, 0, 1), 3, r, p), Bits::from_string("1"));
    EXPECT_EQ(decode(two_input(0, 1, 1, 0), 1, r, p), Bits::from_string("1"));
    EXPECT_EQ(decode(two_input(0, 1, 1, 0), 3, r, p), Bits::from_string("0"));

    // Every row of a constant function decodes to the constant.
    FnSignature c = FnSignature::from_table(2, 3, std::vector<Bits>(4, Bits::from_string("101")));
    Bits rc = rng.bits(randomness_length(2, 3, p));
    std::vector<Bits> all = cre_labels(2, 3, rc, p);
    Bits off = cre_offline(c, rc, p);
    for (int b0 = 0; b0 < 2; b0++) {
        for (int b1 = 0; b1 < 2; b1++) {
            EXPECT_EQ(cdec(2, 3, off, {all[b0], all[2 + b1]}, p), Bits::from_string("101"));
        }
    }

    // No inputs: the offline string is the output.
    FnSignature k = FnSignature::from_table(0, 4, {Bits::from_string("0110")});
    CreEncoding e = cenc(k, 0, Bits(), p);
    EXPECT_TRUE(e.labels.empty());
    EXPECT_EQ(cdec(0, 4, e.offline, {}, p), Bits::from_string("0110"));
}

TEST(cre, round_trip_exhaustive) {
    Rng rng(2026);
    for (int n = 0; n <= 3; n++) {
        for (uint64_t m = 1; m <= 4; m++) {
            for (int sb : {-1, 0, 1, 3}) {
                CreParams p = CreParams::with_segments(sb);
                for (int trial = 0; trial < 100; trial++) {
                    FnSignature f = random_fn(n, m, rng);
                    Bits r = rng.bits(randomness_length(n, m, p));
                    for (uint64_t x = 0; x < (uint64_t{1} << n); x++) ASSERT_EQ(decode(f, x, r, p), f.table[x]);
                }
            }
        }
    }
}

TEST(cre, corrupted_pointer_reads_another_row) {
    Rng rng(3);
    CreParams p;
    // Distinct rows so the wrong row is visible.
    std::vector<Bits> t;
    for (int w = 0; w < 4; w++) t.push_back(Bits::from_uint(w, 2));
    FnSignature f = FnSignature::from_table(2, 2, t);
    int differ = 0;
    for (int trial = 0; trial < 50; trial++) {
        Bits r = rng.bits(randomness_length(2, 2, p));
        CreEncoding e = cenc(f, 1, r, p);
        e.labels[0].flip(e.labels[0].size() - 1);
        Bits y = cdec(2, 2, e.offline, e.labels, p);
        EXPECT_EQ(y.size(), 2u);
        if (y != f.table[1]) differ++;
    }
    EXPECT_GT(differ, 40);
}

TEST(cre, length_mismatch_is_integrity_error) {
    CreParams p;
    Rng rng(1);
    FnSignature f = two_input(0, 0, 0, 1);
    CreEncoding e = cenc(f, 2, rng.bits(randomness_length(2, 1, p)), p);
    std::vector<Bits> bad = e.labels;
    bad[1].push_back(false);
    EXPECT_THROW(cdec(2, 1, e.offline, bad, p), IntegrityError);
    EXPECT_THROW(cdec(2, 1, e.offline.slice(0, 3), e.labels, p), IntegrityError);
    EXPECT_THROW(cenc(f, 0, Bits(4), p), Error);
}

TEST(cre, simulator_decodes_to_target) {
    Rng rng(17);
    for (int n = 0; n <= 4; n++) {
        for (CreParams p : {CreParams(), CreParams::with_segments(1), CreParams::prg(8)}) {
            Bits y = rng.bits(6);
            CreEncoding e = csim(n, y, rng, p);
            EXPECT_EQ(e.offline.size(), (size_t{1} << n) * 6);
            EXPECT_EQ(cdec(n, 6, e.offline, e.labels, p), y);
        }
    }
}

TEST(cre, exhaustive_privacy_small) {
    // Every (f, x) with f(x) = 1 for two-input one-bit functions.
    CreParams p = CreParams::with_segments(1);
    int checked = 0;
    for (int code = 0; code < 16; code++) {
        FnSignature f = two_input(code >> 3 & 1, code >> 2 & 1, code >> 1 & 1, code & 1);
        for (uint64_t x = 0; x < 4; x++) {
            if (!f.table[x].get(0)) continue;
            EXPECT_TRUE(cre_privacy_exhaustive(f, x, p)) << code << " " << x;
            checked++;
        }
    }
    EXPECT_EQ(checked, 32);
}

TEST(cre, pointer_bits_are_uniform) {
    CreParams p = CreParams::with_segments(1);
    FnSignature f = two_input(0, 1, 1, 1);
    EXPECT_TRUE(cre_privacy_exhaustive(f, 3, p));
    std::map<Bits, int> first_pointer;
    for (uint64_t v = 0; v < 1024; v++) {
        Bits r = Bits::from_uint(v, 10);
        CreEncoding e = cenc(f, 3, r, p);
        first_pointer[Bits::from_uint(e.labels[0].get(1), 1)]++;
    }
    EXPECT_EQ(first_pointer.size(), 2u);
    EXPECT_EQ(first_pointer.begin()->second, 512);
}

TEST(cre, prg_mode) {
    CreParams p = CreParams::prg(8);
    Bits seed = Bits::from_string("10110010");
    EXPECT_EQ(prg_expand(seed, 200), prg_expand(seed, 200));
    EXPECT_NE(prg_expand(seed, 200), prg_expand(Bits::from_string("10110011"), 200));
    EXPECT_EQ(prg_expand(seed, 70).slice(0, 50), prg_expand(seed, 50));
    Rng rng(8);
    for (int n = 1; n <= 3; n++) {
        EXPECT_EQ(label_length(n, 500, p), (uint64_t{1} << (n - 1)) * 8 + 1);
        FnSignature f = random_fn(n, 500, rng);
        Bits r = rng.bits(randomness_length(n, 500, p));
        for (uint64_t x = 0; x < (uint64_t{1} << n); x++) ASSERT_EQ(decode(f, x, r, p), f.table[x]);
    }
}

TEST(cre, labels_ignore_table_contents) {
    Rng rng(4);
    CreParams p;
    FnSignature f = random_fn(3, 5, rng), g = random_fn(3, 5, rng);
    Bits r = rng.bits(randomness_length(3, 5, p));
    EXPECT_EQ(cre_labels(3, 5, r, p), cre_labels(3, 5, r, p));
    CreEncoding ef = cenc(f, 6, r, p), eg = cenc(g, 6, r, p);
    EXPECT_EQ(ef.labels, eg.labels);
    EXPECT_NE(ef.offline, eg.offline);
}

TEST(cre, decomposability) {
    Rng rng(9);
    CreParams p;
    FnSignature f = random_fn(3, 4, rng);
    Bits r = rng.bits(randomness_length(3, 4, p));
    for (uint64_t x = 0; x < 8; x++) {
        CreEncoding e = cenc(f, x, r, p);
        EXPECT_EQ(e.offline, cre_offline(f, r, p));
        for (int i = 0; i < 3; i++) {
            // Recompute with the other inputs masked out.
            bool xi = (x >> (2 - i)) & 1;
            EXPECT_EQ(e.labels[i], cre_label(3, 4, i, xi, r, p));
            EXPECT_EQ(e.labels[i], cenc(f, xi ? (uint64_t{1} << (2 - i)) : 0, r, p).labels[i]);
        }
    }
}

TEST(cre, serialization_round_trip) {
    Rng rng(10);
    CreParams p = CreParams::with_segments(2);
    FnSignature f = random_fn(2, 3, rng);
    CreEncoding e = cenc(f, 2, rng.bits(randomness_length(2, 3, p)), p);
    std::string text = cre_serialize(e, 2, 3, p);
    EXPECT_EQ(text.rfind("qgc-cre v1\nsig 2 3\nparams it segment_bits=2\n", 0), 0u) << text;
    EXPECT_EQ(cre_parse(text), e);
    EXPECT_THROW(cre_parse("bogus\n"), ParseError);
}
