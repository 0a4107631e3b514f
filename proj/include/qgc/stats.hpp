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

#ifndef QGC_STATS_HPP
#define QGC_STATS_HPP

#include <cstdint>
#include <vector>

namespace qgc {

/// Pearson chi-squared p-value of counts against the uniform distribution.
double chi2_uniform_pvalue(const std::vector<uint64_t>& counts);

/// Two-sample chi-squared p-value for equal cell distributions.
double chi2_two_sample_pvalue(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b);

}  // namespace qgc

#endif
