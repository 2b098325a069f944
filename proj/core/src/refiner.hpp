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

#ifndef BBACHECK_SRC_REFINER_HPP_
#define BBACHECK_SRC_REFINER_HPP_

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "graph.hpp"

namespace bbacheck::equivalence::detail {

// Incremental signature refinement. Each round recomputes signatures only
// for states whose signature may have changed and splits blocks against the
// partition fixed at round start, so round r yields the same partition as the
// r-th naive refinement step. The largest part of a split block keeps its id.
//
// Branching mode expects a graph without silent cycles.
class Refiner {
 public:
  enum class Mode { Strong, Branching };

  Refiner(const GraphView& g, Mode mode, bool keepHistory);

  void run();

  const PodArray<std::uint32_t>& blockOf() const { return blockOf_; }
  std::uint32_t numBlocks() const { return static_cast<std::uint32_t>(first_.size()); }
  std::uint32_t rounds() const { return round_; }

  // Block of `s` after `round` refinement steps; needs keepHistory.
  std::uint32_t blockAt(std::uint32_t s, std::uint32_t round) const;

  // Signature of `s` against the partition after `round` steps, as sorted
  // (label << 32 | block) keys; needs keepHistory for round < rounds().
  std::vector<std::uint64_t> signatureAt(std::uint32_t s, std::uint32_t round) const;

  bool inertAt(std::uint32_t s, std::size_t t, std::uint32_t round) const;

 private:
  void buildPredecessors();
  void mark(std::uint32_t s);
  void processBlock(std::uint32_t b);
  void signature(std::uint32_t s, std::vector<std::uint64_t>& out);
  void appendMemo(std::uint32_t s, std::vector<std::uint64_t>& out);
  void setDirty(std::uint32_t s);
  template <class StateAt>
  void prefetch(std::size_t i, std::size_t count, StateAt stateAt) const;
  void finishHistory();

  GraphView g_;
  Mode mode_;
  bool keepHistory_;
  std::uint32_t round_ = 0;

  PodArray<std::uint32_t> blockOf_, elems_, pos_;
  PodArray<std::uint32_t> first_, end_, marks_;
  PodArray<std::uint32_t> poff_, psrc_, tpoff_, tpsrc_;
  PodArray<std::uint8_t> dirtyFlag_;
  std::vector<std::uint32_t> dirty_, touched_;
  std::vector<std::uint32_t> work_;

  // Branching signatures of inert successors, valid for the current round.
  std::unordered_map<std::uint32_t, std::pair<std::size_t, std::size_t>> memo_;
  std::vector<std::uint64_t> memoData_;

  struct Move {
    std::uint32_t state, round, block;
  };
  std::vector<Move> log_;
  PodArray<std::uint32_t> hoff_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> hist_;  // (round, block)

  std::vector<std::uint64_t> scratch_;
  std::vector<std::uint64_t> sigA_;
};

}  // namespace bbacheck::equivalence::detail

#endif  // BBACHECK_SRC_REFINER_HPP_
