/*
 * Copyright (c) 2026, The bbacheck Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#ifndef BBACHECK_SRC_PIPELINE_HPP_
#define BBACHECK_SRC_PIPELINE_HPP_

#include "bbacheck/equivalence.hpp"

namespace bbacheck::equivalence::detail {

// Weak comparison by saturating the disjoint union directly. Cheaper than
// compare() when both systems are already minimal modulo branching
// bisimilarity.
Verdict compareWeakSaturated(const Lts& a, const Lts& b);

}  // namespace bbacheck::equivalence::detail

#endif  // BBACHECK_SRC_PIPELINE_HPP_
