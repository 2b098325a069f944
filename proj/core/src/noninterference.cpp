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

#include "bbacheck/noninterference.hpp"

#include <algorithm>
#include <cctype>

#include "bbacheck/trace.hpp"
#include "pipeline.hpp"

namespace bbacheck::noninterference {

using equivalence::compare;
using equivalence::minimize;

LtsSize sizeOf(const Lts& lts) { return LtsSize{lts.numStates(), lts.numTransitions()}; }

NiVerdict bsnni(Lts lts, const GateSet& highGates, EquivalenceKind kind, BsnniOptions options) {
  return bsnni(std::move(lts), highGates, std::vector<EquivalenceKind>{kind}, options).front();
}

std::vector<NiVerdict> bsnni(Lts lts, const GateSet& highGates, const std::vector<EquivalenceKind>& kinds,
                             BsnniOptions options) {
  const bool needStrong = std::count(kinds.begin(), kinds.end(), EquivalenceKind::Strong) > 0;
  const bool needWeak = std::count(kinds.begin(), kinds.end(), EquivalenceKind::Weak) > 0;
  const bool needBranching = needWeak || std::count(kinds.begin(), kinds.end(), EquivalenceKind::Branching) > 0;

  // Branching quotients also serve the weak verdict: they are weakly
  // bisimilar to the operands and small enough to saturate.
  struct Operands {
    std::optional<Lts> strong, branching;
  };
  Operands cut, hide;
  LtsSize cutSize, hideSize;
  auto reduce = [&](Lts operand, Operands& out) {
    if (!options.minimizeOperands) {
      if (needStrong) out.strong = operand;
      if (needBranching) out.branching = std::move(operand);
      return;
    }
    trace::log("minimizing operand: ", operand.numStates(), " states");
    if (needStrong) out.strong = minimize(operand, EquivalenceKind::Strong);
    if (needBranching) {
      out.branching = minimize(operand, EquivalenceKind::Branching);
      operand = Lts();
      trace::log("branching quotient: ", out.branching->numStates(), " states");
    }
  };
  {
    Lts hidden = lts::hideLabels(lts, highGates);
    hideSize = sizeOf(hidden);
    reduce(std::move(hidden), hide);
  }
  {
    Lts cutOperand = lts::cutLabels(lts, highGates);
    lts = Lts();
    cutSize = sizeOf(cutOperand);
    reduce(std::move(cutOperand), cut);
  }

  std::vector<NiVerdict> out;
  for (EquivalenceKind kind : kinds) {
    const Lts* c = nullptr;
    const Lts* h = nullptr;
    switch (kind) {
      case EquivalenceKind::Strong:
        c = &*cut.strong, h = &*hide.strong;
        break;
      case EquivalenceKind::Branching:
        c = &*cut.branching, h = &*hide.branching;
        break;
      case EquivalenceKind::Weak:
        c = &*cut.branching, h = &*hide.branching;
        break;
    }
    NiVerdict v;
    v.kind = kind;
    v.cut = cutSize;
    v.hide = hideSize;
    v.cutCompared = sizeOf(*c);
    v.hideCompared = sizeOf(*h);
    auto verdict = kind == EquivalenceKind::Weak && options.minimizeOperands
                       ? equivalence::detail::compareWeakSaturated(*c, *h)
                       : compare(*c, *h, kind);
    v.pass = verdict.equivalent;
    v.witness = std::move(verdict.witness);
    out.push_back(std::move(v));
  }
  return out;
}

std::string verdictLine(const NiVerdict& verdict) {
  std::string name(equivalence::kindName(verdict.kind));
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
  return name + "_BSNNI: " + (verdict.pass ? "PASS" : "FAIL");
}

}  // namespace bbacheck::noninterference
