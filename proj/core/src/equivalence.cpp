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

#include "bbacheck/equivalence.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <string>

#include "bbacheck/error.hpp"
#include "bbacheck/trace.hpp"
#include "graph.hpp"
#include "pipeline.hpp"
#include "refiner.hpp"

namespace bbacheck::equivalence {

using detail::Graph;
using detail::GraphView;
using detail::kNoLabel;
using detail::PodArray;
using detail::Refiner;

namespace {

constexpr std::uint32_t kNone = 0xffffffffu;

// How quotient rows are induced from a block's members.
enum class Rows {
  Representative,  // any member: all members have the same strong signature
  Bottom,          // a member without an inert silent step (branching)
  Union,           // every member, inert silent steps dropped (weak)
};

// Renumbers blocks in order of their smallest member, so that quotients of
// minimal systems keep their state order.
PodArray<std::uint32_t> byFirstMember(const PodArray<std::uint32_t>& block, std::uint32_t numBlocks) {
  PodArray<std::uint32_t> id(numBlocks, kNone);
  PodArray<std::uint32_t> out(block.size(), 0);
  std::uint32_t next = 0;
  for (std::size_t s = 0; s < block.size(); ++s) {
    std::uint32_t& b = id[block[s]];
    if (b == kNone) b = next++;
    out[s] = b;
  }
  return out;
}

Graph quotientGraph(const GraphView& g, const PodArray<std::uint32_t>& block, std::uint32_t numBlocks, Rows policy) {
  Graph q;
  q.n = numBlocks;
  q.tau = g.tau;
  auto inert = [&](std::uint32_t s, std::size_t t) { return g.lab[t] == g.tau && block[g.tgt[t]] == block[s]; };

  PodArray<std::uint32_t> rep(numBlocks, kNone);
  if (policy != Rows::Union) {
    for (std::uint32_t s = 0; s < g.n; ++s) {
      const std::uint32_t b = block[s];
      if (rep[b] != kNone) continue;
      bool ok = true;
      if (policy == Rows::Bottom) {
        for (std::size_t t = g.off[s]; t < g.off[s + 1] && ok; ++t) ok = !inert(s, t);
      }
      if (ok) rep[b] = s;
    }
  }
  auto included = [&](std::uint32_t s) { return policy == Rows::Union || rep[block[s]] == s; };
  auto keep = [&](std::uint32_t s, std::size_t t) { return policy == Rows::Representative || !inert(s, t); };

  q.off = PodArray<std::uint32_t>(numBlocks + 1, 0);
  for (std::uint32_t s = 0; s < g.n; ++s) {
    if (!included(s)) continue;
    for (std::size_t t = g.off[s]; t < g.off[s + 1]; ++t) q.off[block[s] + 1] += keep(s, t);
  }
  for (std::size_t b = 1; b <= numBlocks; ++b) q.off[b] += q.off[b - 1];
  q.lab.resize(q.off[numBlocks]);
  q.tgt.resize(q.off[numBlocks]);
  PodArray<std::uint32_t> fill(numBlocks, 0);
  for (std::uint32_t s = 0; s < g.n; ++s) {
    if (!included(s)) continue;
    const std::uint32_t b = block[s];
    for (std::size_t t = g.off[s]; t < g.off[s + 1]; ++t) {
      if (!keep(s, t)) continue;
      const std::uint32_t at = q.off[b] + fill[b]++;
      q.lab[at] = g.lab[t];
      q.tgt[at] = block[g.tgt[t]];
    }
  }
  detail::normalizeRows(q);
  return q;
}

// Breadth-first renumbering of the part reachable from `initial`.
Lts canonicalLts(const Graph& q, std::uint32_t initial, std::vector<ActionLabel> labels) {
  PodArray<std::uint32_t> id(q.n, kNone);
  std::vector<std::uint32_t> order{initial};
  id[initial] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::uint32_t s = order[i];
    for (std::size_t t = q.off[s]; t < q.off[s + 1]; ++t) {
      const std::uint32_t d = q.tgt[t];
      if (id[d] == kNone) {
        id[d] = static_cast<std::uint32_t>(order.size());
        order.push_back(d);
      }
    }
  }
  PodArray<std::uint32_t> off(order.size() + 1, 0);
  PodArray<std::uint16_t> lab;
  PodArray<std::uint32_t> tgt;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::uint32_t s = order[i];
    for (std::size_t t = q.off[s]; t < q.off[s + 1]; ++t) {
      lab.push_back(q.lab[t]);
      tgt.push_back(id[q.tgt[t]]);
    }
    off[i + 1] = static_cast<std::uint32_t>(tgt.size());
  }
  return Lts::fromRows(order.size(), 0, std::move(labels), std::move(off), std::move(lab), std::move(tgt));
}

// A graph with its silent cycles contracted.
struct Collapsed {
  GraphView base;
  detail::TauCollapse c;

  explicit Collapsed(const GraphView& g) : base(g), c(detail::collapseTauCycles(g)) {
    if (!c.identity) trace::log("silent cycles collapsed: ", g.n, " -> ", c.graph.n, " states");
  }
  GraphView view() const { return c.identity ? base : c.graph.view(); }
  std::uint32_t map(std::uint32_t s) const { return c.identity ? s : c.component[s]; }
};

// Branching classes of a collapsed graph and the quotient over them.
struct BranchingQuotient {
  PodArray<std::uint32_t> block;
  Graph graph;
};

BranchingQuotient branchingQuotient(const GraphView& g) {
  Refiner r(g, Refiner::Mode::Branching, false);
  r.run();
  BranchingQuotient out;
  out.block = byFirstMember(r.blockOf(), r.numBlocks());
  out.graph = quotientGraph(g, out.block, r.numBlocks(), Rows::Bottom);
  return out;
}

std::vector<std::uint32_t> stateBlocks(const Lts& lts, EquivalenceKind kind) {
  const GraphView g = detail::viewOf(lts);
  std::vector<std::uint32_t> ids(lts.numStates());
  if (kind == EquivalenceKind::Strong) {
    Refiner r(g, Refiner::Mode::Strong, false);
    r.run();
    for (std::uint32_t s = 0; s < g.n; ++s) ids[s] = r.blockOf()[s];
    return ids;
  }
  const Collapsed c(g);
  const BranchingQuotient bq = branchingQuotient(c.view());
  if (kind == EquivalenceKind::Branching) {
    for (std::uint32_t s = 0; s < g.n; ++s) ids[s] = bq.block[c.map(s)];
    return ids;
  }
  const Graph sat = detail::saturate(bq.graph.view());
  Refiner w(sat.view(), Refiner::Mode::Strong, false);
  w.run();
  for (std::uint32_t s = 0; s < g.n; ++s) ids[s] = w.blockOf()[bq.block[c.map(s)]];
  return ids;
}

// Follows the refinement history from a split pair down to an observable
// difference, collecting the labels taken on the way.
std::vector<std::uint32_t> traceBack(const GraphView& g, const Refiner& r, std::uint32_t p, std::uint32_t q,
                                     bool branching, bool dropTau) {
  std::vector<std::uint32_t> trace;
  auto level = [&](std::uint32_t x, std::uint32_t y) {
    for (std::uint32_t k = 0; k <= r.rounds(); ++k) {
      if (r.blockAt(x, k) != r.blockAt(y, k)) return k;
    }
    return kNone;
  };
  auto silentClosure = [&](std::uint32_t s, std::uint32_t round, bool inertOnly) {
    std::vector<std::uint32_t> seen{s};
    for (std::size_t i = 0; i < seen.size(); ++i) {
      const std::uint32_t v = seen[i];
      if (!branching) break;
      for (std::size_t t = g.off[v]; t < g.off[v + 1]; ++t) {
        if (g.lab[t] != g.tau || (inertOnly && !r.inertAt(v, t, round))) continue;
        if (std::find(seen.begin(), seen.end(), g.tgt[t]) == seen.end()) seen.push_back(g.tgt[t]);
      }
    }
    return seen;
  };

  const std::size_t bound = g.n + r.rounds() + 4;
  for (std::size_t step = 0; step < bound; ++step) {
    const std::uint32_t k = level(p, q);
    if (k == kNone || k == 0) break;
    const std::uint32_t r0 = k - 1;
    auto sp = r.signatureAt(p, r0);
    auto sq = r.signatureAt(q, r0);
    std::vector<std::uint64_t> diff;
    std::set_difference(sp.begin(), sp.end(), sq.begin(), sq.end(), std::back_inserter(diff));
    if (diff.empty()) {
      std::swap(p, q);
      std::set_difference(sq.begin(), sq.end(), sp.begin(), sp.end(), std::back_inserter(diff));
    }
    if (diff.empty()) break;
    const std::uint32_t a = static_cast<std::uint32_t>(diff.front() >> 32);
    const std::uint32_t target = static_cast<std::uint32_t>(diff.front());

    std::uint32_t next = kNone;
    for (std::uint32_t v : silentClosure(p, r0, true)) {
      for (std::size_t t = g.off[v]; t < g.off[v + 1] && next == kNone; ++t) {
        if (g.lab[t] == a && !r.inertAt(v, t, r0) && r.blockAt(g.tgt[t], r0) == target) next = g.tgt[t];
      }
      if (next != kNone) break;
    }
    if (next == kNone) break;
    if (branching && a == g.tau) {
      p = next;
      continue;
    }
    if (!(dropTau && a == g.tau)) trace.push_back(a);

    std::uint32_t answer = kNone;
    for (std::uint32_t v : silentClosure(q, r0, false)) {
      for (std::size_t t = g.off[v]; t < g.off[v + 1] && answer == kNone; ++t) {
        if (g.lab[t] == a && r.blockAt(g.tgt[t], r0) != target) answer = g.tgt[t];
      }
      if (answer != kNone) break;
    }
    if (answer == kNone) break;
    p = next;
    q = answer;
  }
  return trace;
}

}  // namespace

std::string_view kindName(EquivalenceKind kind) {
  switch (kind) {
    case EquivalenceKind::Strong:
      return "strong";
    case EquivalenceKind::Weak:
      return "weak";
    case EquivalenceKind::Branching:
      return "branching";
  }
  return "strong";
}

EquivalenceKind parseKind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (EquivalenceKind k : {EquivalenceKind::Strong, EquivalenceKind::Weak, EquivalenceKind::Branching}) {
    if (lower == kindName(k)) return k;
  }
  throw InvalidArgument("unknown equivalence kind '" + std::string(text) + "'");
}

Partition Partition::fromBlockIds(const std::vector<std::uint32_t>& ids) {
  Partition p;
  p.blockOf.resize(ids.size());
  std::vector<std::uint32_t> renumber;
  std::vector<std::uint32_t> seenAt;
  for (std::size_t s = 0; s < ids.size(); ++s) {
    if (ids[s] >= renumber.size()) renumber.resize(ids[s] + 1, kNone);
    std::uint32_t& b = renumber[ids[s]];
    if (b == kNone) {
      b = static_cast<std::uint32_t>(p.blocks.size());
      p.blocks.emplace_back();
    }
    p.blockOf[s] = b;
    p.blocks[b].push_back(static_cast<StateId>(s));
  }
  return p;
}

Partition coarsestPartition(const Lts& lts, EquivalenceKind kind) { return Partition::fromBlockIds(stateBlocks(lts, kind)); }

Lts minimize(const Lts& lts, EquivalenceKind kind) {
  const GraphView g = detail::viewOf(lts);
  if (kind == EquivalenceKind::Strong) {
    Refiner r(g, Refiner::Mode::Strong, false);
    r.run();
    const PodArray<std::uint32_t> block = byFirstMember(r.blockOf(), r.numBlocks());
    const Graph q = quotientGraph(g, block, r.numBlocks(), Rows::Representative);
    return canonicalLts(q, block[lts.initial()], lts.labels());
  }
  const Collapsed c(g);
  const BranchingQuotient bq = branchingQuotient(c.view());
  const std::uint32_t init = bq.block[c.map(lts.initial())];
  if (kind == EquivalenceKind::Branching) return canonicalLts(bq.graph, init, lts.labels());

  const GraphView bv = bq.graph.view();
  const Graph sat = detail::saturate(bv);
  Refiner w(sat.view(), Refiner::Mode::Strong, false);
  w.run();
  const PodArray<std::uint32_t> block = byFirstMember(w.blockOf(), w.numBlocks());
  const Graph q = quotientGraph(bv, block, w.numBlocks(), Rows::Union);
  return canonicalLts(q, block[init], lts.labels());
}

namespace {

// Refines `view` over the union with history and fills the verdict.
void decide(const detail::Union& u, const GraphView& view, std::uint32_t p, std::uint32_t q, bool branching,
            bool dropTau, Verdict& v) {
  Refiner r(view, branching ? Refiner::Mode::Branching : Refiner::Mode::Strong, true);
  r.run();
  v.equivalent = r.blockOf()[p] == r.blockOf()[q];
  if (!v.equivalent) {
    std::vector<ActionLabel> trace;
    for (std::uint32_t l : traceBack(view, r, p, q, branching, dropTau)) trace.push_back(u.labels[l]);
    v.witness = std::move(trace);
  }
}

}  // namespace

Verdict compare(const Lts& a, const Lts& b, EquivalenceKind kind) {
  const detail::Union u = detail::disjointUnion(a, b);
  const GraphView g = u.graph.view();
  Verdict v;
  if (kind == EquivalenceKind::Strong) {
    decide(u, g, u.initialA, u.initialB, false, false, v);
    return v;
  }
  const Collapsed c(g);
  if (kind == EquivalenceKind::Branching) {
    decide(u, c.view(), c.map(u.initialA), c.map(u.initialB), true, true, v);
    return v;
  }
  const BranchingQuotient bq = branchingQuotient(c.view());
  const Graph sat = detail::saturate(bq.graph.view());
  decide(u, sat.view(), bq.block[c.map(u.initialA)], bq.block[c.map(u.initialB)], false, true, v);
  return v;
}

Verdict detail::compareWeakSaturated(const Lts& a, const Lts& b) {
  const detail::Union u = detail::disjointUnion(a, b);
  Verdict v;
  const Graph sat = detail::saturate(u.graph.view());
  decide(u, sat.view(), u.initialA, u.initialB, false, true, v);
  return v;
}

}  // namespace bbacheck::equivalence
