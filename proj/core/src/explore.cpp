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

// State-space generation. The operators at the top of the root term that
// are preserved by every transition (parallel composition, hiding and
// restriction) form a fixed skeleton; a global state is the tuple of the
// skeleton's leaf terms. Leaf successors are memoized, so each global
// state costs one product construction over cached lists.

#include <algorithm>
#include <limits>

#include "bbacheck/lts.hpp"

namespace bbacheck::lts {

using calculus::Environment;
using calculus::LabelId;
using calculus::Term;
using calculus::TermKind;
using detail::PodArray;

namespace {

constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

struct SkeletonNode {
  TermKind kind = TermKind::Nil;  // Parallel, Hide, Restrict, or Nil for a leaf
  std::uint32_t gateSet = 0;
  std::uint32_t left = 0, right = 0;  // child node indices
  std::uint32_t leaf = 0;             // leaf position when kind == Nil
};

struct Change {
  std::uint32_t position;
  Term target;
};

struct Move {
  LabelId label;
  std::uint32_t begin, end;  // range in the change pool
};

class Explorer {
 public:
  Explorer(Environment& env, Term root, const ExploreLimits& limits) : env_(env), limits_(limits) {
    if (limits.maxStates == 0 || limits.maxTransitions == 0) {
      throw InvalidArgument("exploration limits must be positive");
    }
    root_ = buildSkeleton(root);
    width_ = leafTerms_.size();
    local_.resize(width_);
    localTerms_.resize(width_);
  }

  Lts run() {
    std::vector<std::uint32_t> key(width_);
    for (std::size_t p = 0; p < width_; ++p) key[p] = localIndex(p, leafTerms_[p]);
    insertState(key.data());

    PodArray<std::uint32_t> offsets;
    offsets.push_back(0);
    PodArray<std::uint16_t> labelIds;
    PodArray<std::uint32_t> targets;
    std::vector<std::uint32_t> cur(width_), next(width_);

    for (std::size_t s = 0; s < numStates_; ++s) {
      for (std::size_t p = 0; p < width_; ++p) cur[p] = keyAt(s, p);
      pool_.clear();
      moves_.clear();
      generate(root_, cur.data(), moves_);
      const std::size_t rowStart = targets.size();
      for (const Move& m : moves_) {
        next = cur;
        for (std::uint32_t c = m.begin; c < m.end; ++c) {
          next[pool_[c].position] = localIndex(pool_[c].position, pool_[c].target);
        }
        const std::uint32_t target = insertState(next.data());
        const std::uint16_t label = ltsLabel(m.label);
        bool dup = false;
        for (std::size_t u = rowStart; u < targets.size() && !dup; ++u) {
          dup = labelIds[u] == label && targets[u] == target;
        }
        if (dup) continue;
        if (targets.size() >= limits_.maxTransitions) {
          throw LimitExceeded(LimitExceeded::Kind::MaxTransitions, limits_.maxTransitions);
        }
        labelIds.push_back(label);
        targets.push_back(target);
      }
      offsets.push_back(static_cast<std::uint32_t>(targets.size()));
    }
    releaseIndex();
    return Lts::fromRows(numStates_, 0, std::move(labels_), std::move(offsets), std::move(labelIds),
                         std::move(targets));
  }

  // Term of state `s`, rebuilt through the environment.
  Term termOf(std::size_t s) {
    std::vector<Term> leaves(width_);
    for (std::size_t p = 0; p < width_; ++p) leaves[p] = localTerms_[p][keyAt(s, p)];
    return rebuild(root_, leaves);
  }

  std::size_t numStates() const { return numStates_; }

 private:
  std::uint32_t buildSkeleton(Term t) {
    const auto& n = env_.node(t);
    SkeletonNode sk;
    if (n.kind == TermKind::Parallel) {
      sk.kind = n.kind;
      sk.gateSet = n.a;
      sk.left = buildSkeleton(Term{n.b});
      sk.right = buildSkeleton(Term{n.c});
    } else if (n.kind == TermKind::Hide || n.kind == TermKind::Restrict) {
      sk.kind = n.kind;
      sk.gateSet = n.a;
      sk.left = buildSkeleton(Term{n.b});
    } else {
      sk.leaf = static_cast<std::uint32_t>(leafTerms_.size());
      leafTerms_.push_back(t);
    }
    skeleton_.push_back(sk);
    return static_cast<std::uint32_t>(skeleton_.size() - 1);
  }

  Term rebuild(std::uint32_t node, const std::vector<Term>& leaves) {
    const SkeletonNode sk = skeleton_[node];
    if (sk.kind == TermKind::Nil) return leaves[sk.leaf];
    const auto names = env_.gateSetNames(sk.gateSet);
    const calculus::GateSet gates(names.begin(), names.end());
    if (sk.kind == TermKind::Parallel) return env_.parallel(gates, rebuild(sk.left, leaves), rebuild(sk.right, leaves));
    if (sk.kind == TermKind::Hide) return env_.hide(gates, rebuild(sk.left, leaves));
    return env_.restrict(gates, rebuild(sk.left, leaves));
  }

  bool inSet(std::uint32_t setId, LabelId label) {
    if (label == calculus::kTauLabel) return false;
    const std::size_t key = label;
    auto& cache = setCache_[setId];
    if (key >= cache.size()) cache.resize(key + 1, -1);
    if (cache[key] < 0) cache[key] = env_.gateSetContains(setId, env_.gateOf(label)) ? 1 : 0;
    return cache[key] == 1;
  }

  const std::vector<calculus::Transition>& leafSuccessors(Term t) {
    if (t.id >= leafMemo_.size()) leafMemo_.resize(std::max<std::size_t>(t.id + 1, leafMemo_.size() * 2));
    auto& slot = leafMemo_[t.id];
    if (!slot) slot = std::make_unique<std::vector<calculus::Transition>>(calculus::successors(env_, t));
    return *slot;
  }

  // Appends the moves of skeleton node `node` in state `key` to `out`.
  void generate(std::uint32_t node, const std::uint32_t* key, std::vector<Move>& out) {
    const SkeletonNode& sk = skeleton_[node];
    switch (sk.kind) {
      case TermKind::Nil: {
        const Term t = localTerms_[sk.leaf][key[sk.leaf]];
        for (const auto& tr : leafSuccessors(t)) {
          const auto b = static_cast<std::uint32_t>(pool_.size());
          pool_.push_back(Change{sk.leaf, tr.target});
          out.push_back(Move{tr.label, b, b + 1});
        }
        return;
      }
      case TermKind::Hide:
      case TermKind::Restrict: {
        const std::size_t first = out.size();
        generate(sk.left, key, out);
        std::size_t w = first;
        for (std::size_t i = first; i < out.size(); ++i) {
          Move m = out[i];
          if (inSet(sk.gateSet, m.label)) {
            if (sk.kind == TermKind::Restrict) continue;
            m.label = calculus::kTauLabel;
          }
          out[w++] = m;
        }
        out.resize(w);
        return;
      }
      case TermKind::Parallel: {
        std::vector<Move> lhs, rhs;
        generate(sk.left, key, lhs);
        generate(sk.right, key, rhs);
        std::vector<const Move*> syncR;
        for (const Move& m : lhs) {
          if (!inSet(sk.gateSet, m.label)) out.push_back(m);
        }
        for (const Move& m : rhs) {
          if (inSet(sk.gateSet, m.label)) {
            syncR.push_back(&m);
          } else {
            out.push_back(m);
          }
        }
        for (const Move& l : lhs) {
          if (!inSet(sk.gateSet, l.label)) continue;
          for (const Move* r : syncR) {
            if (r->label != l.label) continue;
            const auto b = static_cast<std::uint32_t>(pool_.size());
            for (std::uint32_t c = l.begin; c < l.end; ++c) {
              const Change ch = pool_[c];
              pool_.push_back(ch);
            }
            for (std::uint32_t c = r->begin; c < r->end; ++c) {
              const Change ch = pool_[c];
              pool_.push_back(ch);
            }
            out.push_back(Move{l.label, b, static_cast<std::uint32_t>(pool_.size())});
          }
        }
        return;
      }
      default:
        throw Error("unexpected skeleton node");
    }
  }

  std::uint16_t ltsLabel(LabelId id) {
    if (id >= labelMap_.size()) labelMap_.resize(id + 1, kUnset);
    if (labelMap_[id] == kUnset) {
      if (labels_.size() >= Lts::kMaxLabels) throw Error("too many distinct labels");
      labelMap_[id] = static_cast<std::uint32_t>(labels_.size());
      labels_.push_back(env_.label(id));
    }
    return static_cast<std::uint16_t>(labelMap_[id]);
  }

  std::uint32_t localIndex(std::size_t position, Term t) {
    auto& map = local_[position];
    auto [it, inserted] = map.emplace(t.id, static_cast<std::uint32_t>(localTerms_[position].size()));
    if (inserted) {
      localTerms_[position].push_back(t);
      if (localTerms_[position].size() > 0xffff && wide_ == false) widen();
    }
    return it->second;
  }

  // Keys are stored as 16-bit local indices until some position needs more.
  std::uint32_t keyAt(std::size_t s, std::size_t p) const {
    return wide_ ? keys32_[s * width_ + p] : keys16_[s * width_ + p];
  }

  void widen() {
    wide_ = true;
    keys32_.resize(keys16_.size());
    for (std::size_t i = 0; i < keys16_.size(); ++i) keys32_[i] = keys16_[i];
    PodArray<std::uint16_t>().swap(keys16_);
  }

  std::uint64_t hashKey(const std::uint32_t* key) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::size_t p = 0; p < width_; ++p) {
      h ^= key[p] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
    }
    return h ^ (h >> 29);
  }

  bool keyEquals(std::size_t s, const std::uint32_t* key) const {
    for (std::size_t p = 0; p < width_; ++p) {
      if (keyAt(s, p) != key[p]) return false;
    }
    return true;
  }

  void growTable() {
    const std::size_t cap = table_.empty() ? 1024 : table_.size() * 2;
    PodArray<std::uint32_t> fresh(cap, kUnset);
    const std::size_t mask = cap - 1;
    std::vector<std::uint32_t> key(width_);
    for (std::size_t s = 0; s < numStates_; ++s) {
      for (std::size_t p = 0; p < width_; ++p) key[p] = keyAt(s, p);
      std::size_t i = hashKey(key.data()) & mask;
      while (fresh[i] != kUnset) i = (i + 1) & mask;
      fresh[i] = static_cast<std::uint32_t>(s);
    }
    table_.swap(fresh);
  }

  std::uint32_t insertState(const std::uint32_t* key) {
    if ((numStates_ + 1) * 10 > table_.size() * 7) growTable();
    const std::size_t mask = table_.size() - 1;
    std::size_t i = hashKey(key) & mask;
    while (table_[i] != kUnset) {
      if (keyEquals(table_[i], key)) return table_[i];
      i = (i + 1) & mask;
    }
    if (numStates_ >= limits_.maxStates) throw LimitExceeded(LimitExceeded::Kind::MaxStates, limits_.maxStates);
    const auto id = static_cast<std::uint32_t>(numStates_++);
    table_[i] = id;
    for (std::size_t p = 0; p < width_; ++p) {
      if (wide_) {
        keys32_.push_back(key[p]);
      } else {
        keys16_.push_back(static_cast<std::uint16_t>(key[p]));
      }
    }
    return id;
  }

  void releaseIndex() { PodArray<std::uint32_t>().swap(table_); }

  Environment& env_;
  ExploreLimits limits_;
  std::vector<SkeletonNode> skeleton_;
  std::uint32_t root_ = 0;
  std::vector<Term> leafTerms_;
  std::size_t width_ = 0;
  std::vector<std::unordered_map<std::uint32_t, std::uint32_t>> local_;
  std::vector<std::vector<Term>> localTerms_;
  std::vector<std::unique_ptr<std::vector<calculus::Transition>>> leafMemo_;
  std::unordered_map<std::uint32_t, std::vector<std::int8_t>> setCache_;
  std::vector<Change> pool_;
  std::vector<Move> moves_;
  std::vector<std::uint32_t> labelMap_;
  std::vector<ActionLabel> labels_;
  bool wide_ = false;
  PodArray<std::uint16_t> keys16_;
  PodArray<std::uint32_t> keys32_;
  PodArray<std::uint32_t> table_;
  std::size_t numStates_ = 0;
};

}  // namespace

Lts explore(Environment& env, Term root, const ExploreLimits& limits) { return Explorer(env, root, limits).run(); }

Exploration exploreWithTerms(Environment& env, Term root, const ExploreLimits& limits) {
  Explorer ex(env, root, limits);
  Lts lts = ex.run();
  std::vector<Term> terms(ex.numStates());
  for (std::size_t s = 0; s < terms.size(); ++s) terms[s] = ex.termOf(s);
  return Exploration{std::move(lts), std::move(terms)};
}

}  // namespace bbacheck::lts
