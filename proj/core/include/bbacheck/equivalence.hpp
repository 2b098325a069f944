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

#ifndef BBACHECK_EQUIVALENCE_HPP_
#define BBACHECK_EQUIVALENCE_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "bbacheck/lts.hpp"

namespace bbacheck::equivalence {

using lts::ActionLabel;
using lts::Lts;
using lts::StateId;

enum class EquivalenceKind { Strong, Weak, Branching };

// "strong", "weak" or "branching".
std::string_view kindName(EquivalenceKind kind);
// Accepts the names above in any letter case; throws InvalidArgument.
EquivalenceKind parseKind(std::string_view text);

// Blocks are numbered by their smallest member; each block lists its
// members in increasing order.
struct Partition {
  std::vector<std::uint32_t> blockOf;
  std::vector<std::vector<StateId>> blocks;

  std::size_t numBlocks() const { return blocks.size(); }
  static Partition fromBlockIds(const std::vector<std::uint32_t>& ids);
};

struct Verdict {
  bool equivalent = true;
  // Labels from the initial states up to the first observable divergence.
  // Silent steps are omitted for weak and branching comparisons.
  std::optional<std::vector<ActionLabel>> witness;
};

// Coarsest bisimulation of the given kind over the states of `lts`.
Partition coarsestPartition(const Lts& lts, EquivalenceKind kind);

// Quotient modulo the given kind restricted to states reachable from the
// initial block. Silent steps inside a block are dropped for weak and
// branching. States are numbered in breadth-first order.
Lts minimize(const Lts& lts, EquivalenceKind kind);

// Relates the initial states through the maximal bisimulation of the
// given kind over the disjoint union of both systems.
Verdict compare(const Lts& a, const Lts& b, EquivalenceKind kind);

inline constexpr std::size_t kBruteForceMaxStates = 64;

// Independent greatest fixed point over all state pairs; throws
// InvalidArgument when the two systems have more than
// kBruteForceMaxStates states together.
bool bruteForceBisim(const Lts& a, const Lts& b, EquivalenceKind kind);

}  // namespace bbacheck::equivalence

#endif  // BBACHECK_EQUIVALENCE_HPP_
