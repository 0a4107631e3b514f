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

#ifndef QGC_COMMON_HPP
#define QGC_COMMON_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qgc {

inline constexpr const char* kVersion = "0.1.0";

/// Tolerances and size caps, kept in one place.
struct Tolerances {
    static constexpr double kNorm = 1e-10;
    static constexpr double kExact = 1e-9;
    static constexpr double kMatrix = 1e-12;
    static constexpr double kPsdFloor = -1e-9;
    static constexpr double kStat = 0.05;
    static constexpr int kPureQubitCap = 22;
    static constexpr int kDensityQubitCap = 11;
};

class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};
/// Malformed input text or arguments.
class ParseError : public Error {
   public:
    using Error::Error;
};
/// A requested size exceeds a configured cap or budget.
class BudgetError : public Error {
   public:
    using Error::Error;
};
/// A bundle or message failed an integrity check.
class IntegrityError : public Error {
   public:
    using Error::Error;
};

/// Packed bit string. Bit 0 is the first (most significant when printed).
class Bits {
   public:
    Bits() = default;
    explicit Bits(size_t n) : words_((n + 63) / 64, 0), n_(n) {}
    static Bits from_string(std::string_view s);
    static Bits from_uint(uint64_t v, int width);
    static Bits from_hex(std::string_view hex, size_t nbits);

    size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }
    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    bool operator[](size_t i) const { return get(i); }
    void set(size_t i, bool v) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= m;
        } else {
            words_[i >> 6] &= ~m;
        }
    }
    void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }
    void push_back(bool v);
    void append(const Bits& other);
    /// Appends `width` bits of v, most significant first.
    void append_uint(uint64_t v, int width);
    uint64_t read_uint(size_t pos, int width) const;
    Bits slice(size_t pos, size_t len) const;
    void resize(size_t n);

    Bits& operator^=(const Bits& o);
    friend Bits operator^(Bits a, const Bits& b) { return a ^= b; }
    bool operator==(const Bits& o) const { return n_ == o.n_ && words_ == o.words_; }
    bool operator!=(const Bits& o) const { return !(*this == o); }
    bool operator<(const Bits& o) const;

    size_t popcount() const;
    bool parity() const { return popcount() & 1; }
    bool is_zero() const { return popcount() == 0; }
    std::string to_string() const;
    std::string to_hex() const;
    uint64_t hash() const;
    const std::vector<uint64_t>& words() const { return words_; }

   private:
    std::vector<uint64_t> words_;
    size_t n_ = 0;
};

/// Seeded random stream. All randomness in the library flows through this.
class Rng {
   public:
    explicit Rng(uint64_t seed) : eng_(seed) {}
    uint64_t next() { return eng_(); }
    bool bit() { return eng_() & 1; }
    /// Uniform in [0, n).
    uint64_t below(uint64_t n) { return std::uniform_int_distribution<uint64_t>(0, n - 1)(eng_); }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
    Bits bits(size_t n);
    std::mt19937_64& engine() { return eng_; }

   private:
    std::mt19937_64 eng_;
};

uint64_t splitmix64(uint64_t x);

/// Saturating arithmetic for size planning.
inline uint64_t sat_add(uint64_t a, uint64_t b) {
    uint64_t r;
    return __builtin_add_overflow(a, b, &r) ? UINT64_MAX : r;
}
inline uint64_t sat_mul(uint64_t a, uint64_t b) {
    uint64_t r;
    return __builtin_mul_overflow(a, b, &r) ? UINT64_MAX : r;
}
/// trial seed = hash(master seed, suite id, trial index)
uint64_t split_seed(uint64_t master, std::string_view suite, uint64_t index);

}  // namespace qgc

#endif
