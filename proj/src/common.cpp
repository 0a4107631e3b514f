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

#include "qgc/common.hpp"

#include <bit>

namespace qgc {

Bits Bits::from_string(std::string_view s) {
    Bits b(s.size());
    for (size_t i = 0; i < s.size(); i++) {
        if (s[i] != '0' && s[i] != '1') throw ParseError("bad bit character");
        b.set(i, s[i] == '1');
    }
    return b;
}

Bits Bits::from_uint(uint64_t v, int width) {
    Bits b;
    b.append_uint(v, width);
    return b;
}

Bits Bits::from_hex(std::string_view hex, size_t nbits) {
    if (hex.size() != (nbits + 3) / 4) throw ParseError("hex length does not match bit count");
    Bits b(nbits);
    for (size_t k = 0; k < hex.size(); k++) {
        char c = hex[k];
        int v;
        if (c >= '0' && c <= '9') {
            v = c - '0';
        } else if (c >= 'a' && c <= 'f') {
            v = c - 'a' + 10;
        } else if (c >= 'A' && c <= 'F') {
            v = c - 'A' + 10;
        } else {
            throw ParseError("bad hex character");
        }
        for (int j = 0; j < 4; j++) {
            size_t i = 4 * k + j;
            bool bit = (v >> (3 - j)) & 1;
            if (i < nbits) {
                b.set(i, bit);
            } else if (bit) {
                throw ParseError("nonzero hex padding");
            }
        }
    }
    return b;
}

void Bits::push_back(bool v) {
    if ((n_ & 63) == 0) words_.push_back(0);
    n_++;
    set(n_ - 1, v);
}

void Bits::append(const Bits& other) {
    if ((n_ & 63) == 0) {
        // Word aligned: copy whole words.
        words_.insert(words_.end(), other.words_.begin(), other.words_.end());
        n_ += other.n_;
        return;
    }
    size_t old = n_;
    resize(n_ + other.n_);
    int sh = old & 63;
    size_t w0 = old >> 6;
    for (size_t k = 0; k < other.words_.size(); k++) {
        uint64_t v = other.words_[k];
        words_[w0 + k] |= v << sh;
        if (w0 + k + 1 < words_.size()) words_[w0 + k + 1] |= v >> (64 - sh);
    }
    // Clear anything past n_ that came from other's padding (other keeps its padding zero).
}

void Bits::append_uint(uint64_t v, int width) {
    for (int j = width - 1; j >= 0; j--) push_back((v >> j) & 1);
}

uint64_t Bits::read_uint(size_t pos, int width) const {
    if (pos + width > n_) throw ParseError("read past end of bit string");
    uint64_t v = 0;
    for (int j = 0; j < width; j++) v = (v << 1) | uint64_t(get(pos + j));
    return v;
}

Bits Bits::slice(size_t pos, size_t len) const {
    if (pos + len > n_) throw ParseError("slice past end of bit string");
    Bits b(len);
    if ((pos & 63) == 0) {
        for (size_t k = 0; k < b.words_.size(); k++) b.words_[k] = words_[(pos >> 6) + k];
        if (len & 63) b.words_.back() &= (uint64_t{1} << (len & 63)) - 1;
        return b;
    }
    int sh = pos & 63;
    size_t w0 = pos >> 6;
    for (size_t k = 0; k < b.words_.size(); k++) {
        uint64_t lo = words_[w0 + k] >> sh;
        uint64_t hi = (w0 + k + 1 < words_.size()) ? words_[w0 + k + 1] << (64 - sh) : 0;
        b.words_[k] = lo | hi;
    }
    if (len & 63) b.words_.back() &= (uint64_t{1} << (len & 63)) - 1;
    return b;
}

void Bits::resize(size_t n) {
    words_.resize((n + 63) / 64, 0);
    if (n < n_ && (n & 63)) words_.back() &= (uint64_t{1} << (n & 63)) - 1;
    n_ = n;
}

Bits& Bits::operator^=(const Bits& o) {
    if (o.n_ != n_) throw Error("xor of bit strings with different lengths");
    for (size_t k = 0; k < words_.size(); k++) words_[k] ^= o.words_[k];
    return *this;
}

bool Bits::operator<(const Bits& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return words_ < o.words_;
}

size_t Bits::popcount() const {
    size_t c = 0;
    for (uint64_t w : words_) c += std::popcount(w);
    return c;
}

std::string Bits::to_string() const {
    std::string s(n_, '0');
    for (size_t i = 0; i < n_; i++) {
        if (get(i)) s[i] = '1';
    }
    return s;
}

std::string Bits::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s((n_ + 3) / 4, '0');
    for (size_t k = 0; k < s.size(); k++) {
        int v = 0;
        for (int j = 0; j < 4; j++) {
            size_t i = 4 * k + j;
            v = (v << 1) | int(i < n_ && get(i));
        }
        s[k] = digits[v];
    }
    return s;
}

uint64_t Bits::hash() const {
    uint64_t h = splitmix64(n_);
    for (uint64_t w : words_) h = splitmix64(h ^ w);
    return h;
}

Bits Rng::bits(size_t n) {
    Bits b(n);
    for (size_t i = 0; i < n; i += 64) {
        uint64_t w = eng_();
        for (size_t j = 0; j < 64 && i + j < n; j++) b.set(i + j, (w >> j) & 1);
    }
    return b;
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t split_seed(uint64_t master, std::string_view suite, uint64_t index) {
    uint64_t h = splitmix64(master);
    for (char c : suite) h = splitmix64(h ^ uint8_t(c));
    return splitmix64(h ^ splitmix64(index + 0x51ed27ULL));
}

}  // namespace qgc
