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

#include <array>
#include <cstdint>
#include <vector>

#include "bbacheck/equivalence.hpp"
#include "bbacheck/error.hpp"

namespace bbacheck::equivalence {

namespace {

using Set = std::uint64_t;

struct Combined {
  std::size_t n = 0;
  std::vector<ActionLabel> labels;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;  // (label, target)
  std::vector<std::vector<Set>> succ;                                 // [label][state]
  std::vector<Set> silentClosure;
  std::size_t tau = SIZE_MAX;

  std::size_t labelId(const ActionLabel& l) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == l) return i;
    }
    labels.push_back(l);
    return labels.size() - 1;
  }

  void add(const Lts& l, std::size_t shift) {
    for (StateId s = 0; s < l.numStates(); ++s) {
      for (std::size_t t = l.outBegin(s); t < l.outEnd(s); ++t) {
        out[shift + s].emplace_back(labelId(l.label(l.labelAt(t))), shift + l.targetAt(t));
      }
    }
  }
};

Set bit(std::size_t i) { return Set{1} << i; }

}  // namespace

bool bruteForceBisim(const Lts& a, const Lts& b, EquivalenceKind kind) {
  Combined c;
  c.n = a.numStates() + b.numStates();
  if (c.n > kBruteForceMaxStates) throw InvalidArgument("brute-force oracle is limited to 64 states");
  c.out.resize(c.n);
  c.add(a, 0);
  c.add(b, a.numStates());
  for (std::size_t i = 0; i < c.labels.size(); ++i) {
    if (c.labels[i].isSilent()) c.tau = i;
  }
  c.succ.assign(c.labels.size(), std::vector<Set>(c.n, 0));
  for (std::size_t s = 0; s < c.n; ++s) {
    for (auto [l, t] : c.out[s]) c.succ[l][s] |= bit(t);
  }

  // Reflexive-transitive silent closure by iteration to a fixed point.
  c.silentClosure.assign(c.n, 0);
  for (std::size_t s = 0; s < c.n; ++s) c.silentClosure[s] = bit(s);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < c.n; ++s) {
      Set acc = c.silentClosure[s];
      if (c.tau != SIZE_MAX) {
        for (std::size_t v = 0; v < c.n; ++v) {
          if (c.silentClosure[s] & bit(v)) acc |= c.succ[c.tau][v];
        }
      }
      for (std::size_t v = 0; v < c.n; ++v) {
        if (acc & bit(v)) acc |= c.silentClosure[v];
      }
      if (acc != c.silentClosure[s]) {
        c.silentClosure[s] = acc;
        changed = true;
      }
    }
  }
  auto closureOf = [&](Set set) {
    Set r = 0;
    for (std::size_t v = 0; v < c.n; ++v) {
      if (set & bit(v)) r |= c.silentClosure[v];
    }
    return r;
  };
  // weak[l][s]: states reachable by τ* l τ*; for τ itself just τ*.
  std::vector<std::vector<Set>> weak(c.labels.size(), std::vector<Set>(c.n, 0));
  for (std::size_t l = 0; l < c.labels.size(); ++l) {
    for (std::size_t s = 0; s < c.n; ++s) {
      if (l == c.tau) {
        weak[l][s] = c.silentClosure[s];
        continue;
      }
      Set mid = 0;
      for (std::size_t v = 0; v < c.n; ++v) {
        if (c.silentClosure[s] & bit(v)) mid |= c.succ[l][v];
      }
      weak[l][s] = closureOf(mid);
    }
  }

  std::vector<Set> rel(c.n, c.n == 64 ? ~Set{0} : bit(c.n) - 1);
  auto related = [&](std::size_t x, std::size_t y) { return (rel[x] & bit(y)) != 0; };

  // Can q answer every move of p under the current relation?
  auto answers = [&](std::size_t p, std::size_t q) {
    for (auto [l, p2] : c.out[p]) {
      bool ok = false;
      switch (kind) {
        case EquivalenceKind::Strong:
          ok = (c.succ[l][q] & rel[p2]) != 0;
          break;
        case EquivalenceKind::Weak:
          ok = (weak[l][q] & rel[p2]) != 0;
          break;
        case EquivalenceKind::Branching:
          if (l == c.tau && related(p2, q)) {
            ok = true;
            break;
          }
          for (std::size_t q1 = 0; q1 < c.n && !ok; ++q1) {
            if ((c.silentClosure[q] & bit(q1)) && related(p, q1)) ok = (c.succ[l][q1] & rel[p2]) != 0;
          }
          break;
      }
      if (!ok) return false;
    }
    return true;
  };

  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t p = 0; p < c.n; ++p) {
      for (std::size_t q = 0; q < c.n; ++q) {
        if (related(p, q) && !(answers(p, q) && answers(q, p))) {
          rel[p] &= ~bit(q);
          rel[q] &= ~bit(p);
          changed = true;
        }
      }
    }
  }
  return related(a.initial(), a.numStates() + b.initial());
}

}  // namespace bbacheck::equivalence
