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

#include "qgc/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include "qgc/common.hpp"

namespace qgc {

namespace {

double upper_tail(double stat, int dof) {
    if (dof <= 0) return 1.0;
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

double chi2_uniform_pvalue(const std::vector<uint64_t>& counts) {
    if (counts.size() < 2) throw Error("chi-squared test needs at least two cells");
    double total = 0;
    for (auto c : counts) total += double(c);
    if (total == 0) throw Error("chi-squared test needs samples");
    double expect = total / double(counts.size());
    double stat = 0;
    for (auto c : counts) stat += (double(c) - expect) * (double(c) - expect) / expect;
    return upper_tail(stat, int(counts.size()) - 1);
}

double chi2_two_sample_pvalue(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    if (a.size() != b.size()) throw Error("chi-squared samples have different cell counts");
    double na = 0, nb = 0;
    for (size_t k = 0; k < a.size(); k++) {
        na += double(a[k]);
        nb += double(b[k]);
    }
    if (na == 0 || nb == 0) throw Error("chi-squared test needs samples");
    double stat = 0;
    int cells = 0;
    for (size_t k = 0; k < a.size(); k++) {
        double tot = double(a[k] + b[k]);
        if (tot == 0) continue;
        cells++;
        double ea = tot * na / (na + nb), eb = tot * nb / (na + nb);
        stat += (double(a[k]) - ea) * (double(a[k]) - ea) / ea + (double(b[k]) - eb) * (double(b[k]) - eb) / eb;
    }
    return upper_tail(stat, cells - 1);
}

}  // namespace qgc
