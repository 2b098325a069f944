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

#ifndef BBACHECK_LTS_HPP_
#define BBACHECK_LTS_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bbacheck/calculus.hpp"
#include "bbacheck/error.hpp"
#include "bbacheck/pod_array.hpp"

namespace bbacheck::lts {

using calculus::ActionLabel;
using calculus::GateSet;
using StateId = std::uint32_t;
using LabelIndex = std::uint32_t;

struct LtsTransition {
  StateId source = 0;
  LabelIndex label = 0;
  StateId target = 0;
  auto operator<=>(const LtsTransition&) const = default;
};

/**
 * Explicit labeled transition system in compressed-row form.
 *
 * Labels are stored once in a table and referenced by index. The
 * transitions of state s occupy positions [outBegin(s), outEnd(s)) and are
 * duplicate-free. Explored and cut systems have every state reachable from
 * the initial state; systems read from files are kept as given.
 *
 * The row arrays are immutable and shared between copies, so copying an
 * Lts and relabeling it are cheap.
 */
class Lts {
 public:
  static constexpr std::size_t kMaxLabels = 0xffff;

  // A single state with no transitions.
  Lts();

  // Validates indices, merges duplicate label entries and drops duplicate
  // transitions (the first occurrence wins). Rows keep the relative order
  // of `transitions`.
  Lts(std::size_t numStates, StateId initial, std::vector<ActionLabel> labels,
      std::vector<LtsTransition> transitions);

  // Builds from rows directly; `offsets` has numStates + 1 entries. Labels
  // must be pairwise distinct. Duplicates within a row are dropped.
  static Lts fromRows(std::size_t numStates, StateId initial, std::vector<ActionLabel> labels,
                      detail::PodArray<std::uint32_t> offsets, detail::PodArray<std::uint16_t> labelIds,
                      detail::PodArray<std::uint32_t> targets);

  std::size_t numStates() const { return numStates_; }
  std::size_t numTransitions() const { return targets_->size(); }
  StateId initial() const { return initial_; }
  const std::vector<ActionLabel>& labels() const { return labels_; }
  const ActionLabel& label(LabelIndex i) const { return labels_[i]; }

  std::size_t outBegin(StateId s) const { return (*offsets_)[s]; }
  std::size_t outEnd(StateId s) const { return (*offsets_)[s + 1]; }
  LabelIndex labelAt(std::size_t t) const { return (*labelIds_)[t]; }
  StateId targetAt(std::size_t t) const { return (*targets_)[t]; }
  const std::uint32_t* offsetData() const { return offsets_->data(); }
  const std::uint16_t* labelData() const { return labelIds_->data(); }
  const std::uint32_t* targetData() const { return targets_->data(); }

  // Materialized transition list in row order.
  std::vector<LtsTransition> transitions() const;
  const ActionLabel& labelOf(const LtsTransition& t) const { return labels_[t.label]; }

  bool allReachable() const;

  // Same rows with a different label table; `remap` sends each old label
  // index to an index of `labels`. Rows that become duplicated are merged.
  Lts relabeled(std::vector<ActionLabel> labels, const std::vector<LabelIndex>& remap) const;

  // Identical systems: same state count, same initial state, and the same
  // set of (source, label value, target) triples.
  friend bool operator==(const Lts& a, const Lts& b);

 private:
  std::size_t numStates_ = 1;
  StateId initial_ = 0;
  std::vector<ActionLabel> labels_;
  std::shared_ptr<const detail::PodArray<std::uint32_t>> offsets_;
  std::shared_ptr<const detail::PodArray<std::uint16_t>> labelIds_;
  std::shared_ptr<const detail::PodArray<std::uint32_t>> targets_;
};

// Incremental construction with label interning.
class LtsBuilder {
 public:
  explicit LtsBuilder(std::size_t numStates = 0, StateId initial = 0);
  StateId addState();
  void addTransition(StateId source, const ActionLabel& label, StateId target);
  Lts build() &&;

 private:
  std::size_t numStates_;
  StateId initial_;
  std::vector<ActionLabel> labels_;
  std::unordered_map<ActionLabel, LabelIndex> index_;
  std::vector<LtsTransition> transitions_;
};

struct ExploreLimits {
  std::size_t maxStates = 60'000'000;
  std::size_t maxTransitions = 250'000'000;
};

class LimitExceeded : public Error {
 public:
  enum class Kind { MaxStates, MaxTransitions };
  LimitExceeded(Kind kind, std::size_t limit);
  Kind kind() const { return kind_; }
  std::size_t limit() const { return limit_; }
  // "maxStates" or "maxTransitions".
  const char* limitName() const;

 private:
  Kind kind_;
  std::size_t limit_;
};

struct Exploration {
  Lts lts;
  // Term of every state, indexed by state id.
  std::vector<calculus::Term> stateTerms;
};

// Breadth-first generation of the reachable state space of `root`.
// States are numbered in discovery order; state 0 is `root`. The static
// tree of parallel, hiding and restriction operators at the top of `root`
// is kept implicit: a state is stored as the tuple of its leaf terms.
Lts explore(calculus::Environment& env, calculus::Term root, const ExploreLimits& limits = {});
Exploration exploreWithTerms(calculus::Environment& env, calculus::Term root,
                             const ExploreLimits& limits = {});

// Transitions on `gates` become silent.
Lts hideLabels(const Lts& lts, const GateSet& gates);

// Transitions on `gates` are removed, then states no longer reachable from
// the initial state are dropped. Surviving states keep their relative order.
Lts cutLabels(const Lts& lts, const GateSet& gates);

// Gates of every transition reachable from `from`.
GateSet reachableGates(const Lts& lts, StateId from);

// Targets of transitions whose gate is `gate` (sorted, unique).
std::vector<StateId> statesEnteredBy(const Lts& lts, std::string_view gate);

// reaching[s] is true when some path from s takes a `gate` transition.
// A nonempty `stopAt` bounds the paths: they may not take a `stopAt`
// transition before the `gate` one.
std::vector<bool> statesReaching(const Lts& lts, std::string_view gate, std::string_view stopAt = {});

// States with an outgoing transition on every gate of `gates`.
std::vector<StateId> statesEnablingAll(const Lts& lts, const GateSet& gates);

struct SafetyReport {
  bool ok = true;
  // Path from the initial state into the observer's error state.
  std::vector<ActionLabel> counterexample;
};

/**
 * Round observer: between two consecutive `roundGate` transitions,
 * exactly one of `commitGates` must occur, and no commit may precede the
 * first round. Checked by reachability of the observer's error state in
 * the product with `lts`.
 */
SafetyReport checkRoundSafety(const Lts& lts,
                              std::string_view roundGate = calculus::gates::kReceiveBlockProposal,
                              const GateSet& commitGates = {
                                  std::string(calculus::gates::kCommitProposedBlock),
                                  std::string(calculus::gates::kCommitEmptyBlock)});

}  // namespace bbacheck::lts

#endif  // BBACHECK_LTS_HPP_
