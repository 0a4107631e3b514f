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

#ifndef QGC_VERIFY_HPP
#define QGC_VERIFY_HPP

#include <string>
#include <vector>

#include "qgc/qgc.hpp"

namespace qgc::verify {

struct Config {
    uint64_t seed = 1;
    int samples = 2000;                 // Monte-Carlo draws per circuit (residue)
    int instances = 200;                // random circuits (correctness)
    double tol_exact = Tolerances::kExact;
    double tol_unitary = Tolerances::kNorm;
    double tol_stat = Tolerances::kStat;
};

/// One measured quantity against its bound. pass means value <= bound,
/// unless `at_least` flips the comparison (negative controls).
struct Check {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool at_least = false;
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<Check> checks;
    double seconds = 0.0;
    bool pass() const;
};

const std::vector<std::string>& suite_names();

// Individual check groups. Each is deterministic given cfg.seed.
std::vector<Check> identity_checks(const Config& cfg);     // gadget circuit identities
std::vector<Check> teleport_checks(const Config& cfg);     // closed form of the teleport gadget
std::vector<Check> twirl_checks(const Config& cfg);        // averaged gadget output
std::vector<Check> cre_privacy_checks(const Config& cfg);  // exhaustive multiset equality
std::vector<Check> correctness_checks(const Config& cfg);  // dec(enc) against the reference
std::vector<Check> backend_checks(const Config& cfg);      // explicit vs compressed, every branch
std::vector<Check> residue_checks(const Config& cfg);      // decoder view depends on topology only
std::vector<Check> gr_checks(const Config& cfg);           // group-randomizing encoding

/// Runs a named suite ("all" runs every suite). Throws Error on unknown names.
std::vector<SuiteReport> run(const std::string& suite, const Config& cfg);

/// key=value lines, one per check, then one summary line per suite.
std::string format_report(const std::vector<SuiteReport>& reports, const Config& cfg);

// Oracles shared with the unit tests.

/// 1/2 sum_{d,e} Z^sz X^sx|d> |l_zd> |l_xe> Z^tz X^tx|e> X^e Z^d|psi>, on
/// registers u z x v up.
std::vector<cd> teleport_closed_form(const TeleportParams& p, const std::vector<cd>& psi);

/// Teleport gadget averaged over all 16 twirl bits, against the product of
/// maximally mixed u, v and the key-indexed mixture, with `pair` a two-qubit
/// state on (side, u).
double twirl_distance(const TeleportParams& labels, const std::vector<cd>& pair);

/// Estimated total variation between the decoder's classical views of two
/// encodings: 1 when their shapes differ, else the largest per-coordinate gap.
struct ResidueEstimate {
    double distance = 0.0;
    double output_error = 0.0;  // worst trace distance of the decoded output
};
ResidueEstimate residue_distance(const Circuit& a, const QuantumState& xa, const Circuit& b, const QuantumState& xb,
                                 int samples, Rng& rng);

}  // namespace qgc::verify

#endif
