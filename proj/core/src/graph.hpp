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

#ifndef BBACHECK_SRC_GRAPH_HPP_
#define BBACHECK_SRC_GRAPH_HPP_

#include <cstdint>
#include <vector>

#include "bbacheck/lts.hpp"
#include "bbacheck/pod_array.hpp"

namespace bbacheck::equivalence::detail {

using bbacheck::detail::PodArray;

inline constexpr std::uint32_t kNoLabel = 0xffffffffu;

// Read-only row view. Label indices refer to a table owned elsewhere;
// `tau` is the index of the silent label or kNoLabel.
struct GraphView {
  std::size_t n = 0;
  const std::uint32_t* off = nullptr;
  const std::uint16_t* lab = nullptr;
  const std::uint32_t* tgt = nullptr;
  std::uint32_t tau = kNoLabel;

  std::size_t m() const { return n ? off[n] : 0; }
};

struct Graph {
  std::size_t n = 0;
  PodArray<std::uint32_t> off;
  PodArray<std::uint16_t> lab;
  PodArray<std::uint32_t> tgt;
  std::uint32_t tau = kNoLabel;

  GraphView view() const { return GraphView{n, off.data(), lab.data(), tgt.data(), tau}; }
};

GraphView viewOf(const lts::Lts& lts);

// Disjoint union of two systems over a merged label table; states of `b`
// are shifted by a.numStates().
struct Union {
  Graph graph;
  std::vector<lts::ActionLabel> labels;
  lts::StateId initialA = 0, initialB = 0;
};
Union disjointUnion(const lts::Lts& a, const lts::Lts& b);

// Strongly connected components of the silent transitions.
struct TauCollapse {
  bool identity = true;  // no silent cycle or loop: the input is unchanged
  Graph graph;           // valid when !identity
  PodArray<std::uint32_t> component;  // state -> collapsed state
};
TauCollapse collapseTauCycles(const GraphView& g);

// Observational closure: s =a=> u for s τ* a τ* u, and s =τ=> u for s τ* u
// including s itself.
Graph saturate(const GraphView& g);

// Sorts each row and removes repeated (label, target) pairs in place.
void normalizeRows(Graph& g);

}  // namespace bbacheck::equivalence::detail

#endif  // BBACHECK_SRC_GRAPH_HPP_
