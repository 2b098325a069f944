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

#include "refiner.hpp"

#include "bbacheck/trace.hpp"

#include <algorithm>

namespace bbacheck::equivalence::detail {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

std::uint32_t hashOf(const std::vector<std::uint64_t>& sig) {
  std::uint64_t h = mix(0x9e3779b97f4a7c15ull ^ sig.size());
  for (std::uint64_t k : sig) h = mix(h ^ (k + 0x632be59bd9b4e019ull));
  return static_cast<std::uint32_t>(h >> 32);
}

std::uint64_t key(std::uint32_t label, std::uint32_t block) { return (std::uint64_t{label} << 32) | block; }

void sortUnique(std::vector<std::uint64_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

Refiner::Refiner(const GraphView& g, Mode mode, bool keepHistory) : g_(g), mode_(mode), keepHistory_(keepHistory) {
  const std::size_t n = g_.n;
  blockOf_ = PodArray<std::uint32_t>(n, 0);
  elems_.resize(n);
  pos_.resize(n);
  for (std::uint32_t s = 0; s < n; ++s) elems_[s] = pos_[s] = s;
  dirtyFlag_ = PodArray<std::uint8_t>(n, 0);
  if (n > 0) {
    first_.push_back(0);
    end_.push_back(static_cast<std::uint32_t>(n));
    marks_.push_back(0);
  }
  buildPredecessors();
}

void Refiner::buildPredecessors() {
  const std::size_t n = g_.n;
  const bool branching = mode_ == Mode::Branching && g_.tau != kNoLabel;
  poff_ = PodArray<std::uint32_t>(n + 1, 0);
  if (branching) tpoff_ = PodArray<std::uint32_t>(n + 1, 0);
  for (std::size_t t = 0; t < g_.m(); ++t) {
    ++poff_[g_.tgt[t] + 1];
    if (branching && g_.lab[t] == g_.tau) ++tpoff_[g_.tgt[t] + 1];
  }
  for (std::size_t i = 1; i <= n; ++i) poff_[i] += poff_[i - 1];
  if (branching) {
    for (std::size_t i = 1; i <= n; ++i) tpoff_[i] += tpoff_[i - 1];
  }
  psrc_.resize(g_.m());
  if (branching) tpsrc_.resize(n ? tpoff_[n] : 0);
  PodArray<std::uint32_t> fill(n, 0), tfill(branching ? n : 0, 0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = g_.off[s]; t < g_.off[s + 1]; ++t) {
      const std::uint32_t d = g_.tgt[t];
      psrc_[poff_[d] + fill[d]++] = static_cast<std::uint32_t>(s);
      if (branching && g_.lab[t] == g_.tau) tpsrc_[tpoff_[d] + tfill[d]++] = static_cast<std::uint32_t>(s);
    }
  }
}

void Refiner::signature(std::uint32_t s, std::vector<std::uint64_t>& out) {
  out.clear();
  const std::uint32_t bs = blockOf_[s];
  if (mode_ == Mode::Strong || g_.tau == kNoLabel) {
    for (std::size_t t = g_.off[s]; t < g_.off[s + 1]; ++t) out.push_back(key(g_.lab[t], blockOf_[g_.tgt[t]]));
    sortUnique(out);
    return;
  }
  for (std::size_t t = g_.off[s]; t < g_.off[s + 1]; ++t) {
    const std::uint32_t bt = blockOf_[g_.tgt[t]];
    if (g_.lab[t] == g_.tau && bt == bs) continue;
    out.push_back(key(g_.lab[t], bt));
  }
  for (std::size_t t = g_.off[s]; t < g_.off[s + 1]; ++t) {
    if (g_.lab[t] == g_.tau && blockOf_[g_.tgt[t]] == bs) appendMemo(g_.tgt[t], out);
  }
  sortUnique(out);
}

void Refiner::appendMemo(std::uint32_t s, std::vector<std::uint64_t>& out) {
  auto it = memo_.find(s);
  if (it == memo_.end()) {
    std::vector<std::uint64_t> sig;
    signature(s, sig);
    const std::size_t at = memoData_.size();
    memoData_.insert(memoData_.end(), sig.begin(), sig.end());
    it = memo_.emplace(s, std::make_pair(at, sig.size())).first;
  }
  const auto [at, len] = it->second;
  out.insert(out.end(), memoData_.begin() + static_cast<std::ptrdiff_t>(at),
             memoData_.begin() + static_cast<std::ptrdiff_t>(at + len));
}

void Refiner::mark(std::uint32_t s) {
  const std::uint32_t b = blockOf_[s];
  const std::uint32_t i = pos_[s];
  const std::uint32_t j = first_[b] + marks_[b];
  const std::uint32_t other = elems_[j];
  elems_[i] = other;
  pos_[other] = i;
  elems_[j] = s;
  pos_[s] = j;
  if (marks_[b]++ == 0) touched_.push_back(b);
}

template <class StateAt>
void Refiner::prefetch(std::size_t i, std::size_t count, StateAt stateAt) const {
  // Three stages: the row offset, then the row, then the target blocks.
  constexpr std::size_t kAhead = 8;
  if (i + 3 * kAhead < count) __builtin_prefetch(&g_.off[stateAt(i + 3 * kAhead)]);
  if (i + 2 * kAhead < count) {
    const std::uint32_t s = stateAt(i + 2 * kAhead);
    __builtin_prefetch(&g_.tgt[g_.off[s]]);
    __builtin_prefetch(&g_.lab[g_.off[s]]);
  }
  if (i + kAhead < count) {
    const std::uint32_t s = stateAt(i + kAhead);
    for (std::size_t t = g_.off[s]; t < g_.off[s + 1]; ++t) __builtin_prefetch(&blockOf_[g_.tgt[t]]);
  }
}

void Refiner::processBlock(std::uint32_t b) {
  const std::uint32_t F = first_[b], E = end_[b], size = E - F, M = marks_[b];
  marks_[b] = 0;
  const bool hasRef = M < size;

  // Entries are (hash << 32 | state), later (group << 32 | state).
  scratch_.clear();
  auto marked = [&](std::size_t i) { return elems_[F + i]; };
  for (std::uint32_t i = 0; i < M; ++i) {
    prefetch(i, M, marked);
    signature(elems_[F + i], sigA_);
    scratch_.push_back((std::uint64_t{hashOf(sigA_)} << 32) | elems_[F + i]);
  }
  std::vector<std::uint64_t> refSig;
  std::uint32_t refHash = 0;
  if (hasRef) {
    signature(elems_[F + M], refSig);
    refHash = hashOf(refSig);
  }
  std::sort(scratch_.begin(), scratch_.end());

  // Replace each hash by a group id verified against full signatures.
  std::vector<std::uint32_t> groupSize{hasRef ? size - M : 0};
  std::vector<std::pair<std::uint32_t, std::vector<std::uint64_t>>> reps;
  auto entry = [&](std::size_t i) { return static_cast<std::uint32_t>(scratch_[i]); };
  auto high = [](std::uint64_t e) { return static_cast<std::uint32_t>(e >> 32); };
  auto setGroup = [](std::uint64_t& e, std::uint32_t g) { e = (std::uint64_t{g} << 32) | (e & 0xffffffffu); };
  for (std::size_t i = 0; i < scratch_.size();) {
    const std::uint32_t h = high(scratch_[i]);
    std::size_t j = i + 1;
    while (j < scratch_.size() && high(scratch_[j]) == h) ++j;
    reps.clear();
    if (hasRef && h == refHash) reps.emplace_back(0, refSig);
    if (j - i == 1 && reps.empty()) {
      setGroup(scratch_[i], static_cast<std::uint32_t>(groupSize.size()));
      groupSize.push_back(1);
    } else {
      for (std::size_t k = i; k < j; ++k) {
        prefetch(k, scratch_.size(), entry);
        signature(entry(k), sigA_);
        auto rep = std::find_if(reps.begin(), reps.end(), [&](const auto& r) { return r.second == sigA_; });
        if (rep == reps.end()) {
          reps.emplace_back(static_cast<std::uint32_t>(groupSize.size()), sigA_);
          groupSize.push_back(0);
          rep = reps.end() - 1;
        }
        setGroup(scratch_[k], rep->first);
        ++groupSize[rep->first];
      }
    }
    i = j;
  }
  std::size_t nonEmpty = 0;
  for (std::uint32_t c : groupSize) nonEmpty += c > 0;
  if (nonEmpty <= 1) return;

  std::uint32_t keeper = 0;
  for (std::uint32_t g = 1; g < groupSize.size(); ++g) {
    if (groupSize[g] > groupSize[keeper]) keeper = g;
  }

  // Lay out the region to rearrange: every moving group in ascending order,
  // then the keeper. Only the marked prefix moves when the reference keeps.
  if (keeper != 0) {
    for (std::uint32_t i = F + M; i < E; ++i) scratch_.push_back(elems_[i]);
  }
  constexpr std::uint32_t kKeep = 0xffffffffu;
  for (auto& e : scratch_) {
    if (high(e) == keeper) setGroup(e, kKeep);
  }
  std::sort(scratch_.begin(), scratch_.end());
  std::uint32_t at = F;
  bool sawKeep = false;
  for (std::size_t i = 0; i < scratch_.size();) {
    const std::uint32_t grp = high(scratch_[i]);
    std::size_t j = i;
    while (j < scratch_.size() && high(scratch_[j]) == grp) ++j;
    const bool keep = grp == kKeep;
    if (!keep) {
      first_.push_back(at);
      end_.push_back(at + static_cast<std::uint32_t>(j - i));
      marks_.push_back(0);
    } else {
      first_[b] = at;
      sawKeep = true;
    }
    for (std::size_t k = i; k < j; ++k, ++at) {
      const std::uint32_t s = entry(k);
      elems_[at] = s;
      pos_[s] = at;
    }
    i = j;
  }
  if (!sawKeep) first_[b] = at;
}

void Refiner::setDirty(std::uint32_t s) {
  if (dirtyFlag_[s]) return;
  dirtyFlag_[s] = 1;
  dirty_.push_back(s);
  if (tpoff_.size() == 0) return;
  // Keep the dirty set closed under silent predecessors.
  work_.assign(1, s);
  while (!work_.empty()) {
    const std::uint32_t v = work_.back();
    work_.pop_back();
    for (std::uint32_t i = tpoff_[v]; i < tpoff_[v + 1]; ++i) {
      const std::uint32_t p = tpsrc_[i];
      if (!dirtyFlag_[p]) {
        dirtyFlag_[p] = 1;
        dirty_.push_back(p);
        work_.push_back(p);
      }
    }
  }
}

void Refiner::run() {
  const std::size_t n = g_.n;
  if (n == 0) return;
  marks_[0] = static_cast<std::uint32_t>(n);
  touched_.push_back(0);
  for (std::uint32_t s = 0; s < n; ++s) {
    dirtyFlag_[s] = 1;
    dirty_.push_back(s);
  }
  const bool branching = tpoff_.size() != 0;
  trace::log("refine ", branching ? "branching" : "strong", ": ", n, " states, ", g_.m(), " transitions");
  for (;;) {
    memo_.clear();
    memoData_.clear();
    const std::uint32_t before = numBlocks();
    for (std::uint32_t b : touched_) processBlock(b);
    touched_.clear();
    for (std::uint32_t s : dirty_) dirtyFlag_[s] = 0;
    dirty_.clear();
    if (numBlocks() == before) break;
    ++round_;
    // States that moved are exactly the members of the new blocks.
    std::size_t moved = 0;
    for (std::uint32_t nb = before; nb < numBlocks(); ++nb) {
      moved += end_[nb] - first_[nb];
      for (std::uint32_t i = first_[nb]; i < end_[nb]; ++i) {
        blockOf_[elems_[i]] = nb;
        if (keepHistory_) log_.push_back(Move{elems_[i], round_, nb});
      }
    }
    trace::log("refine round ", round_, ": ", moved, " moved, ", numBlocks(), " blocks");
    for (std::uint32_t nb = before; nb < numBlocks(); ++nb) {
      for (std::uint32_t i = first_[nb]; i < end_[nb]; ++i) {
        const std::uint32_t s = elems_[i];
        if (branching) setDirty(s);
        for (std::uint32_t k = poff_[s]; k < poff_[s + 1]; ++k) setDirty(psrc_[k]);
      }
    }
    for (std::uint32_t s : dirty_) mark(s);
  }
  std::vector<std::uint64_t>().swap(scratch_);
  std::vector<std::uint32_t>().swap(dirty_);
  if (keepHistory_) finishHistory();
}

void Refiner::finishHistory() {
  hoff_ = PodArray<std::uint32_t>(g_.n + 1, 0);
  for (const Move& mv : log_) ++hoff_[mv.state + 1];
  for (std::size_t i = 1; i <= g_.n; ++i) hoff_[i] += hoff_[i - 1];
  hist_.resize(log_.size());
  PodArray<std::uint32_t> fill(g_.n, 0);
  for (const Move& mv : log_) hist_[hoff_[mv.state] + fill[mv.state]++] = {mv.round, mv.block};
  std::vector<Move>().swap(log_);
}

std::uint32_t Refiner::blockAt(std::uint32_t s, std::uint32_t round) const {
  if (round >= round_) return blockOf_[s];
  std::uint32_t block = 0;
  for (std::uint32_t i = hoff_[s]; i < hoff_[s + 1] && hist_[i].first <= round; ++i) block = hist_[i].second;
  return block;
}

bool Refiner::inertAt(std::uint32_t s, std::size_t t, std::uint32_t round) const {
  return mode_ == Mode::Branching && g_.lab[t] == g_.tau && blockAt(g_.tgt[t], round) == blockAt(s, round);
}

std::vector<std::uint64_t> Refiner::signatureAt(std::uint32_t s, std::uint32_t round) const {
  std::vector<std::uint64_t> out;
  std::vector<std::uint32_t> work{s};
  std::vector<std::uint32_t> seen{s};
  while (!work.empty()) {
    const std::uint32_t v = work.back();
    work.pop_back();
    for (std::size_t t = g_.off[v]; t < g_.off[v + 1]; ++t) {
      if (inertAt(v, t, round)) {
        const std::uint32_t w = g_.tgt[t];
        if (std::find(seen.begin(), seen.end(), w) == seen.end()) {
          seen.push_back(w);
          work.push_back(w);
        }
      } else {
        out.push_back(key(g_.lab[t], blockAt(g_.tgt[t], round)));
      }
    }
  }
  sortUnique(out);
  return out;
}

}  // namespace bbacheck::equivalence::detail
