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

#ifndef BBACHECK_NONINTERFERENCE_HPP_
#define BBACHECK_NONINTERFERENCE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "bbacheck/equivalence.hpp"
#include "bbacheck/lts.hpp"

namespace bbacheck::noninterference {

using equivalence::EquivalenceKind;
using lts::ActionLabel;
using lts::GateSet;
using lts::Lts;

struct LtsSize {
  std::size_t states = 0;
  std::size_t transitions = 0;
  friend bool operator==(const LtsSize&, const LtsSize&) = default;
};

LtsSize sizeOf(const Lts& lts);

struct NiVerdict {
  EquivalenceKind kind = EquivalenceKind::Branching;
  bool pass = true;
  std::optional<std::vector<ActionLabel>> witness;
  // Operands before minimization.
  LtsSize cut, hide;
  // Operands as compared; equal to the above without minimization.
  LtsSize cutCompared, hideCompared;
};

struct BsnniOptions {
  bool minimizeOperands = true;
};

// Compares the system with the high gates cut against the system with
// them hidden. Take `lts` by value and move it in so it can be released
// once both operands exist.
NiVerdict bsnni(Lts lts, const GateSet& highGates, EquivalenceKind kind, BsnniOptions options = {});

// One verdict per kind in the order given, sharing minimized operands
// between weak and branching.
std::vector<NiVerdict> bsnni(Lts lts, const GateSet& highGates, const std::vector<EquivalenceKind>& kinds,
                             BsnniOptions options = {});

// "WEAK_BSNNI: PASS" and similar.
std::string verdictLine(const NiVerdict& verdict);

}  // namespace bbacheck::noninterference

#endif  // BBACHECK_NONINTERFERENCE_HPP_
