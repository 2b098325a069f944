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

#include "graph.hpp"

#include <algorithm>
#include <unordered_map>

namespace bbacheck::equivalence::detail {

namespace {

std::uint32_t tauIndex(const std::vector<lts::ActionLabel>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].isSilent()) return static_cast<std::uint32_t>(i);
  }
  return kNoLabel;
}

}  // namespace

GraphView viewOf(const lts::Lts& lts) {
  return GraphView{lts.numStates(), lts.offsetData(), lts.labelData(), lts.targetData(), tauIndex(lts.labels())};
}

Union disjointUnion(const lts::Lts& a, const lts::Lts& b) {
  Union u;
  std::unordered_map<lts::ActionLabel, std::uint16_t> index;
  auto mapTable = [&](const lts::Lts& l) {
    std::vector<std::uint16_t> remap(l.labels().size());
    for (std::size_t i = 0; i < remap.size(); ++i) {
      auto [it, inserted] = index.emplace(l.labels()[i], static_cast<std::uint16_t>(u.labels.size()));
      if (inserted) u.labels.push_back(l.labels()[i]);
      remap[i] = it->second;
    }
    return remap;
  };
  const auto ra = mapTable(a);
  const auto rb = mapTable(b);
  if (u.labels.size() > lts::Lts::kMaxLabels) throw InvalidArgument("too many distinct labels");

  Graph& g = u.graph;
  g.n = a.numStates() + b.numStates();
  g.off.resize(g.n + 1);
  g.lab.resize(a.numTransitions() + b.numTransitions());
  g.tgt.resize(g.lab.size());
  std::size_t w = 0;
  g.off[0] = 0;
  auto copy = [&](const lts::Lts& l, const std::vector<std::uint16_t>& remap, std::size_t shift) {
    for (lts::StateId s = 0; s < l.numStates(); ++s) {
      for (std::size_t t = l.outBegin(s); t < l.outEnd(s); ++t) {
        g.lab[w] = remap[l.labelAt(t)];
        g.tgt[w] = static_cast<std::uint32_t>(l.targetAt(t) + shift);
        ++w;
      }
      g.off[shift + s + 1] = static_cast<std::uint32_t>(w);
    }
  };
  copy(a, ra, 0);
  copy(b, rb, a.numStates());
  g.tau = tauIndex(u.labels);
  u.initialA = a.initial();
  u.initialB = static_cast<lts::StateId>(b.initial() + a.numStates());
  return u;
}

void normalizeRows(Graph& g) {
  std::vector<std::uint64_t> row;
  std::size_t w = 0;
  std::size_t begin = 0;
  for (std::size_t s = 0; s < g.n; ++s) {
    const std::size_t end = g.off[s + 1];
    row.clear();
    for (std::size_t t = begin; t < end; ++t) row.push_back((std::uint64_t{g.lab[t]} << 32) | g.tgt[t]);
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    g.off[s] = static_cast<std::uint32_t>(w);
    for (std::uint64_t k : row) {
      g.lab[w] = static_cast<std::uint16_t>(k >> 32);
      g.tgt[w] = static_cast<std::uint32_t>(k);
      ++w;
    }
    begin = end;
  }
  g.off[g.n] = static_cast<std::uint32_t>(w);
  g.lab.resize(w);
  g.tgt.resize(w);
}

TauCollapse collapseTauCycles(const GraphView& g) {
  TauCollapse out;
  if (g.tau == kNoLabel) return out;
  const std::size_t n = g.n;
  constexpr std::uint32_t kNone = 0xffffffffu;

  // Iterative Tarjan over silent edges.
  PodArray<std::uint32_t> index(n, kNone), low(n, 0), comp(n, kNone);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> call;  // state, next edge
  std::vector<bool> onStack(n, false);
  std::uint32_t counter = 0, comps = 0;
  bool nontrivial = false;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kNone) continue;
    call.emplace_back(root, g.off[root]);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    onStack[root] = true;
    while (!call.empty()) {
      auto& [v, e] = call.back();
      bool descended = false;
      while (e < g.off[v + 1]) {
        const std::uint32_t t = e++;
        if (g.lab[t] != g.tau) continue;
        const std::uint32_t w = g.tgt[t];
        if (w == v) {
          nontrivial = true;
          continue;
        }
        if (index[w] == kNone) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          onStack[w] = true;
          call.emplace_back(w, g.off[w]);
          descended = true;
          break;
        }
        if (onStack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      const std::uint32_t v0 = v;
      if (low[v0] == index[v0]) {
        std::uint32_t w;
        std::size_t members = 0;
        do {
          w = stack.back();
          stack.pop_back();
          onStack[w] = false;
          comp[w] = comps;
          ++members;
        } while (w != v0);
        if (members > 1) nontrivial = true;
        ++comps;
      }
      call.pop_back();
      if (!call.empty()) {
        const std::uint32_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[v0]);
      }
    }
  }
  if (!nontrivial) return out;

  // Number components by their smallest member.
  PodArray<std::uint32_t> renumber(comps, kNone);
  std::uint32_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (renumber[comp[s]] == kNone) renumber[comp[s]] = next++;
  }
  out.identity = false;
  out.component.resize(n);
  for (std::size_t s = 0; s < n; ++s) out.component[s] = renumber[comp[s]];

  Graph& c = out.graph;
  c.n = next;
  c.tau = g.tau;
  PodArray<std::uint32_t> count(next + 1, 0);
  for (std::size_t s = 0; s < n; ++s) {
    const std::uint32_t cs = out.component[s];
    for (std::size_t t = g.off[s]; t < g.off[s + 1]; ++t) {
      if (g.lab[t] == g.tau && out.component[g.tgt[t]] == cs) continue;
      ++count[cs + 1];
    }
  }
  for (std::size_t i = 1; i <= next; ++i) count[i] += count[i - 1];
  c.off = count;
  c.lab.resize(count[next]);
  c.tgt.resize(count[next]);
  PodArray<std::uint32_t> fill(next, 0);
  for (std::size_t i = 0; i < next; ++i) fill[i] = count[i];
  for (std::size_t s = 0; s < n; ++s) {
    const std::uint32_t cs = out.component[s];
    for (std::size_t t = g.off[s]; t < g.off[s + 1]; ++t) {
      const std::uint32_t ct = out.component[g.tgt[t]];
      if (g.lab[t] == g.tau && ct == cs) continue;
      const std::uint32_t at = fill[cs]++;
      c.lab[at] = g.lab[t];
      c.tgt[at] = ct;
    }
  }
  normalizeRows(c);
  return out;
}

Graph saturate(const GraphView& g) {
  Graph out;
  out.n = g.n;
  out.tau = g.tau;
  if (out.tau == kNoLabel) {
    // A reserved index past every real label stands for the silent step.
    std::uint32_t maxLabel = 0;
    for (std::size_t t = 0; t < g.m(); ++t) maxLabel = std::max<std::uint32_t>(maxLabel, g.lab[t]);
    out.tau = g.m() ? maxLabel + 1 : 0;
    if (out.tau > lts::Lts::kMaxLabels) throw InvalidArgument("too many distinct labels");
  }
  const std::uint16_t tau = static_cast<std::uint16_t>(out.tau);

  // Silent closure of every state, computed on demand and cached.
  std::vector<std::vector<std::uint32_t>> closure(g.n);
  std::vector<std::uint32_t> mark(g.n, 0xffffffffu);
  auto closureOf = [&](std::uint32_t s) -> const std::vector<std::uint32_t>& {
    auto& c = closure[s];
    if (!c.empty()) return c;
    std::vector<std::uint32_t> work{s};
    mark[s] = s;
    while (!work.empty()) {
      const std::uint32_t v = work.back();
      work.pop_back();
      c.push_back(v);
      for (std::size_t t = g.off[v]; t < g.off[v + 1]; ++t) {
        if (g.lab[t] != g.tau) continue;
        const std::uint32_t w = g.tgt[t];
        if (mark[w] != s) {
          mark[w] = s;
          work.push_back(w);
        }
      }
    }
    std::sort(c.begin(), c.end());
    return c;
  };

  out.off.resize(g.n + 1);
  out.off[0] = 0;
  std::vector<std::uint64_t> row;
  for (std::uint32_t s = 0; s < g.n; ++s) {
    row.clear();
    const auto cs = closureOf(s);
    for (std::uint32_t u : cs) row.push_back((std::uint64_t{tau} << 32) | u);
    for (std::uint32_t v : cs) {
      for (std::size_t t = g.off[v]; t < g.off[v + 1]; ++t) {
        if (g.lab[t] == g.tau) continue;
        for (std::uint32_t u : closureOf(g.tgt[t])) row.push_back((std::uint64_t{g.lab[t]} << 32) | u);
      }
    }
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    for (std::uint64_t k : row) {
      out.lab.push_back(static_cast<std::uint16_t>(k >> 32));
      out.tgt.push_back(static_cast<std::uint32_t>(k));
    }
    out.off[s + 1] = static_cast<std::uint32_t>(out.tgt.size());
  }
  return out;
}

}  // namespace bbacheck::equivalence::detail
