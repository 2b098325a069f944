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

#include "bbacheck/lts.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace bbacheck::lts {

using detail::PodArray;

namespace {

constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

// Removes repeated (label, target) pairs inside each row, keeping the first
// occurrence, and compacts the arrays in place.
void compactRows(std::size_t numStates, PodArray<std::uint32_t>& offsets, PodArray<std::uint16_t>& labels,
                 PodArray<std::uint32_t>& targets) {
  std::vector<std::uint64_t> seen;
  std::size_t w = 0;
  std::size_t begin = offsets[0];
  for (std::size_t s = 0; s < numStates; ++s) {
    const std::size_t end = offsets[s + 1];
    const std::size_t rowStart = w;
    if (end - begin <= 16) {
      for (std::size_t t = begin; t < end; ++t) {
        bool dup = false;
        for (std::size_t u = rowStart; u < w && !dup; ++u) dup = labels[u] == labels[t] && targets[u] == targets[t];
        if (!dup) {
          labels[w] = labels[t];
          targets[w] = targets[t];
          ++w;
        }
      }
    } else {
      seen.clear();
      for (std::size_t t = begin; t < end; ++t) {
        const std::uint64_t key = (std::uint64_t{labels[t]} << 32) | targets[t];
        seen.push_back(key);
      }
      std::vector<std::uint64_t> sorted = seen;
      std::sort(sorted.begin(), sorted.end());
      std::vector<bool> used(sorted.size(), false);
      for (std::size_t t = begin; t < end; ++t) {
        const std::uint64_t key = seen[t - begin];
        const std::size_t at = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), key) - sorted.begin());
        if (used[at]) continue;
        used[at] = true;
        labels[w] = labels[t];
        targets[w] = targets[t];
        ++w;
      }
    }
    begin = end;
    offsets[s] = static_cast<std::uint32_t>(rowStart);
  }
  offsets[numStates] = static_cast<std::uint32_t>(w);
  labels.resize(w);
  targets.resize(w);
  labels.shrink_to_fit();
  targets.shrink_to_fit();
}

template <class T>
std::shared_ptr<const PodArray<T>> share(PodArray<T>&& a) {
  return std::make_shared<const PodArray<T>>(std::move(a));
}

bool gateIn(const ActionLabel& l, const GateSet& gates) {
  return !l.isSilent() && gates.count(l.gate()) != 0;
}

}  // namespace

Lts::Lts()
    : offsets_(share(PodArray<std::uint32_t>(2, 0))),
      labelIds_(share(PodArray<std::uint16_t>())),
      targets_(share(PodArray<std::uint32_t>())) {}

Lts::Lts(std::size_t numStates, StateId initial, std::vector<ActionLabel> labels,
         std::vector<LtsTransition> transitions) {
  if (numStates == 0) throw InvalidArgument("an LTS needs at least one state");
  if (numStates >= kUnset) throw InvalidArgument("too many states");
  if (transitions.size() >= kUnset) throw InvalidArgument("too many transitions");

  std::unordered_map<ActionLabel, LabelIndex> index;
  std::vector<ActionLabel> table;
  std::vector<LabelIndex> remap(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = index.emplace(labels[i], static_cast<LabelIndex>(table.size()));
    if (inserted) table.push_back(std::move(labels[i]));
    remap[i] = it->second;
  }
  if (table.size() > kMaxLabels) throw InvalidArgument("too many distinct labels");

  PodArray<std::uint32_t> offsets(numStates + 1, 0);
  for (const auto& t : transitions) {
    if (t.source >= numStates || t.target >= numStates) throw InvalidArgument("transition endpoint out of range");
    if (t.label >= remap.size()) throw InvalidArgument("transition label out of range");
    ++offsets[t.source + 1];
  }
  for (std::size_t i = 1; i <= numStates; ++i) offsets[i] += offsets[i - 1];
  PodArray<std::uint16_t> labelIds;
  PodArray<std::uint32_t> targets;
  labelIds.resize(transitions.size());
  targets.resize(transitions.size());
  {
    std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
    for (const auto& t : transitions) {
      const std::uint32_t at = fill[t.source]++;
      labelIds[at] = static_cast<std::uint16_t>(remap[t.label]);
      targets[at] = t.target;
    }
  }
  *this = fromRows(numStates, initial, std::move(table), std::move(offsets), std::move(labelIds), std::move(targets));
}

Lts Lts::fromRows(std::size_t numStates, StateId initial, std::vector<ActionLabel> labels,
                  PodArray<std::uint32_t> offsets, PodArray<std::uint16_t> labelIds, PodArray<std::uint32_t> targets) {
  if (numStates == 0) throw InvalidArgument("an LTS needs at least one state");
  if (numStates >= kUnset) throw InvalidArgument("too many states");
  if (initial >= numStates) throw InvalidArgument("initial state out of range");
  if (labels.size() > kMaxLabels) throw InvalidArgument("too many distinct labels");
  if (offsets.size() != numStates + 1 || offsets[0] != 0 || offsets[numStates] != targets.size() ||
      labelIds.size() != targets.size()) {
    throw InvalidArgument("inconsistent row arrays");
  }
  for (std::size_t s = 0; s < numStates; ++s) {
    if (offsets[s] > offsets[s + 1]) throw InvalidArgument("row offsets must be monotone");
  }
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (targets[t] >= numStates) throw InvalidArgument("transition endpoint out of range");
    if (labelIds[t] >= labels.size()) throw InvalidArgument("transition label out of range");
  }
  compactRows(numStates, offsets, labelIds, targets);
  Lts out;
  out.numStates_ = numStates;
  out.initial_ = initial;
  out.labels_ = std::move(labels);
  out.offsets_ = share(std::move(offsets));
  out.labelIds_ = share(std::move(labelIds));
  out.targets_ = share(std::move(targets));
  return out;
}

std::vector<LtsTransition> Lts::transitions() const {
  std::vector<LtsTransition> out;
  out.reserve(numTransitions());
  for (StateId s = 0; s < numStates_; ++s) {
    for (std::size_t t = outBegin(s); t < outEnd(s); ++t) out.push_back({s, labelAt(t), targetAt(t)});
  }
  return out;
}

bool Lts::allReachable() const {
  std::vector<bool> seen(numStates_, false);
  std::vector<StateId> stack{initial_};
  seen[initial_] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (std::size_t t = outBegin(s); t < outEnd(s); ++t) {
      const StateId u = targetAt(t);
      if (!seen[u]) {
        seen[u] = true;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == numStates_;
}

Lts Lts::relabeled(std::vector<ActionLabel> labels, const std::vector<LabelIndex>& remap) const {
  if (remap.size() != labels_.size()) throw InvalidArgument("label remap has the wrong size");
  for (LabelIndex r : remap) {
    if (r >= labels.size()) throw InvalidArgument("label remap out of range");
  }
  std::vector<bool> merged(labels.size(), false);
  bool injective = true;
  {
    std::vector<bool> hit(labels.size(), false);
    for (LabelIndex r : remap) {
      if (hit[r]) {
        merged[r] = true;
        injective = false;
      }
      hit[r] = true;
    }
  }
  PodArray<std::uint16_t> ids;
  ids.resize(numTransitions());
  bool collision = false;
  for (StateId s = 0; s < numStates_; ++s) {
    const std::size_t b = outBegin(s), e = outEnd(s);
    for (std::size_t t = b; t < e; ++t) ids[t] = static_cast<std::uint16_t>(remap[labelAt(t)]);
    if (injective || collision) continue;
    for (std::size_t t = b; t < e && !collision; ++t) {
      if (!merged[ids[t]]) continue;
      for (std::size_t u = b; u < t; ++u) {
        if (ids[u] == ids[t] && targetAt(u) == targetAt(t)) {
          collision = true;
          break;
        }
      }
    }
  }
  if (collision) {
    return fromRows(numStates_, initial_, std::move(labels), PodArray<std::uint32_t>(*offsets_), std::move(ids),
                    PodArray<std::uint32_t>(*targets_));
  }
  Lts out;
  out.numStates_ = numStates_;
  out.initial_ = initial_;
  out.labels_ = std::move(labels);
  out.offsets_ = offsets_;
  out.labelIds_ = share(std::move(ids));
  out.targets_ = targets_;
  return out;
}

bool operator==(const Lts& a, const Lts& b) {
  if (a.numStates_ != b.numStates_ || a.initial_ != b.initial_ || a.numTransitions() != b.numTransitions()) {
    return false;
  }
  std::unordered_map<ActionLabel, LabelIndex> index;
  for (std::size_t i = 0; i < a.labels_.size(); ++i) index.emplace(a.labels_[i], static_cast<LabelIndex>(i));
  std::vector<LabelIndex> remap(b.labels_.size());
  for (std::size_t i = 0; i < b.labels_.size(); ++i) {
    auto it = index.find(b.labels_[i]);
    remap[i] = it == index.end() ? kUnset : it->second;
  }
  std::vector<std::uint64_t> ra, rb;
  for (StateId s = 0; s < a.numStates_; ++s) {
    if (a.outEnd(s) - a.outBegin(s) != b.outEnd(s) - b.outBegin(s)) return false;
    ra.clear();
    rb.clear();
    for (std::size_t t = a.outBegin(s); t < a.outEnd(s); ++t) {
      ra.push_back((std::uint64_t{a.labelAt(t)} << 32) | a.targetAt(t));
    }
    for (std::size_t t = b.outBegin(s); t < b.outEnd(s); ++t) {
      const LabelIndex l = remap[b.labelAt(t)];
      if (l == kUnset) return false;
      rb.push_back((std::uint64_t{l} << 32) | b.targetAt(t));
    }
    std::sort(ra.begin(), ra.end());
    std::sort(rb.begin(), rb.end());
    if (ra != rb) return false;
  }
  return true;
}

LtsBuilder::LtsBuilder(std::size_t numStates, StateId initial) : numStates_(numStates), initial_(initial) {}

StateId LtsBuilder::addState() { return static_cast<StateId>(numStates_++); }

void LtsBuilder::addTransition(StateId source, const ActionLabel& label, StateId target) {
  auto [it, inserted] = index_.emplace(label, static_cast<LabelIndex>(labels_.size()));
  if (inserted) labels_.push_back(label);
  transitions_.push_back(LtsTransition{source, it->second, target});
}

Lts LtsBuilder::build() && {
  return Lts(numStates_, initial_, std::move(labels_), std::move(transitions_));
}

LimitExceeded::LimitExceeded(Kind kind, std::size_t limit)
    : Error(std::string("exploration limit exceeded: ") + (kind == Kind::MaxStates ? "maxStates" : "maxTransitions") +
            " = " + std::to_string(limit)),
      kind_(kind),
      limit_(limit) {}

const char* LimitExceeded::limitName() const { return kind_ == Kind::MaxStates ? "maxStates" : "maxTransitions"; }

Lts hideLabels(const Lts& lts, const GateSet& gates) {
  if (gates.empty()) return lts;
  std::vector<ActionLabel> table;
  std::vector<LabelIndex> remap(lts.labels().size());
  std::unordered_map<ActionLabel, LabelIndex> index;
  for (std::size_t i = 0; i < remap.size(); ++i) {
    ActionLabel l = gateIn(lts.labels()[i], gates) ? ActionLabel::tau() : lts.labels()[i];
    auto [it, inserted] = index.emplace(l, static_cast<LabelIndex>(table.size()));
    if (inserted) table.push_back(std::move(l));
    remap[i] = it->second;
  }
  return lts.relabeled(std::move(table), remap);
}

Lts cutLabels(const Lts& lts, const GateSet& gates) {
  if (gates.empty()) return lts;
  std::vector<bool> cut(lts.labels().size());
  for (std::size_t i = 0; i < cut.size(); ++i) cut[i] = gateIn(lts.labels()[i], gates);

  const std::size_t n = lts.numStates();
  std::vector<bool> seen(n, false);
  std::vector<StateId> stack{lts.initial()};
  seen[lts.initial()] = true;
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (std::size_t t = lts.outBegin(s); t < lts.outEnd(s); ++t) {
      if (cut[lts.labelAt(t)]) continue;
      const StateId u = lts.targetAt(t);
      if (!seen[u]) {
        seen[u] = true;
        stack.push_back(u);
      }
    }
  }
  PodArray<std::uint32_t> renumber(n, kUnset);
  std::size_t kept = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) renumber[s] = static_cast<std::uint32_t>(kept++);
  }
  std::vector<bool>().swap(seen);
  PodArray<std::uint32_t> offsets(kept + 1, 0);
  PodArray<std::uint16_t> labelIds;
  PodArray<std::uint32_t> targets;
  std::size_t count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (renumber[s] == kUnset) continue;
    for (std::size_t t = lts.outBegin(static_cast<StateId>(s)); t < lts.outEnd(static_cast<StateId>(s)); ++t) {
      if (!cut[lts.labelAt(t)]) ++count;
    }
  }
  labelIds.reserve(count);
  targets.reserve(count);
  for (std::size_t s = 0; s < n; ++s) {
    if (renumber[s] == kUnset) continue;
    for (std::size_t t = lts.outBegin(static_cast<StateId>(s)); t < lts.outEnd(static_cast<StateId>(s)); ++t) {
      if (cut[lts.labelAt(t)]) continue;
      labelIds.push_back(static_cast<std::uint16_t>(lts.labelAt(t)));
      targets.push_back(renumber[lts.targetAt(t)]);
    }
    offsets[renumber[s] + 1] = static_cast<std::uint32_t>(targets.size());
  }
  return Lts::fromRows(kept, renumber[lts.initial()], lts.labels(), std::move(offsets), std::move(labelIds),
                       std::move(targets));
}

GateSet reachableGates(const Lts& lts, StateId from) {
  if (from >= lts.numStates()) throw InvalidArgument("state " + std::to_string(from) + " out of range");
  std::vector<bool> seen(lts.numStates(), false);
  std::vector<bool> labelSeen(lts.labels().size(), false);
  std::vector<StateId> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (std::size_t t = lts.outBegin(s); t < lts.outEnd(s); ++t) {
      labelSeen[lts.labelAt(t)] = true;
      const StateId u = lts.targetAt(t);
      if (!seen[u]) {
        seen[u] = true;
        stack.push_back(u);
      }
    }
  }
  GateSet out;
  for (std::size_t i = 0; i < labelSeen.size(); ++i) {
    if (labelSeen[i] && !lts.labels()[i].isSilent()) out.insert(lts.labels()[i].gate());
  }
  return out;
}

std::vector<StateId> statesEnteredBy(const Lts& lts, std::string_view gate) {
  std::vector<bool> match(lts.labels().size());
  for (std::size_t i = 0; i < match.size(); ++i) {
    match[i] = !lts.labels()[i].isSilent() && lts.labels()[i].gate() == gate;
  }
  std::vector<StateId> out;
  for (std::size_t t = 0; t < lts.numTransitions(); ++t) {
    if (match[lts.labelAt(t)]) out.push_back(lts.targetAt(t));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<bool> statesReaching(const Lts& lts, std::string_view gate, std::string_view stopAt) {
  const std::size_t n = lts.numStates();
  std::vector<bool> match(lts.labels().size()), stop(lts.labels().size());
  for (std::size_t i = 0; i < match.size(); ++i) {
    const ActionLabel& l = lts.labels()[i];
    match[i] = !l.isSilent() && l.gate() == gate;
    stop[i] = !stopAt.empty() && !l.isSilent() && l.gate() == stopAt;
  }
  PodArray<std::uint32_t> poff(n + 1, 0);
  for (std::size_t t = 0; t < lts.numTransitions(); ++t) {
    if (!stop[lts.labelAt(t)]) ++poff[lts.targetAt(t) + 1];
  }
  for (std::size_t i = 1; i <= n; ++i) poff[i] += poff[i - 1];
  PodArray<std::uint32_t> psrc(poff[n]);
  PodArray<std::uint32_t> fill(n, 0);
  std::vector<bool> reaching(n, false);
  std::vector<StateId> work;
  for (StateId s = 0; s < n; ++s) {
    for (std::size_t t = lts.outBegin(s); t < lts.outEnd(s); ++t) {
      const StateId d = lts.targetAt(t);
      if (!stop[lts.labelAt(t)]) psrc[poff[d] + fill[d]++] = s;
      if (match[lts.labelAt(t)] && !reaching[s]) {
        reaching[s] = true;
        work.push_back(s);
      }
    }
  }
  while (!work.empty()) {
    const StateId v = work.back();
    work.pop_back();
    for (std::uint32_t i = poff[v]; i < poff[v + 1]; ++i) {
      if (!reaching[psrc[i]]) {
        reaching[psrc[i]] = true;
        work.push_back(psrc[i]);
      }
    }
  }
  return reaching;
}

std::vector<StateId> statesEnablingAll(const Lts& lts, const GateSet& gates) {
  std::vector<std::string> ordered(gates.begin(), gates.end());
  if (ordered.empty() || ordered.size() > 32) throw InvalidArgument("statesEnablingAll needs between 1 and 32 gates");
  std::vector<std::uint32_t> labelBit(lts.labels().size(), 0);
  for (std::size_t i = 0; i < lts.labels().size(); ++i) {
    const auto& l = lts.labels()[i];
    if (l.isSilent()) continue;
    auto it = std::find(ordered.begin(), ordered.end(), l.gate());
    if (it != ordered.end()) labelBit[i] = 1u << (it - ordered.begin());
  }
  const std::uint32_t full = ordered.size() == 32 ? ~0u : (1u << ordered.size()) - 1;
  std::vector<StateId> out;
  for (StateId s = 0; s < lts.numStates(); ++s) {
    std::uint32_t mask = 0;
    for (std::size_t t = lts.outBegin(s); t < lts.outEnd(s); ++t) mask |= labelBit[lts.labelAt(t)];
    if (mask == full) out.push_back(s);
  }
  return out;
}

SafetyReport checkRoundSafety(const Lts& lts, std::string_view roundGate, const GateSet& commitGates) {
  // Observer phases: before the first round, round open with no commit,
  // round open with one commit.
  enum : std::uint8_t { kBefore = 0, kOpen = 1, kCommitted = 2, kError = 3 };
  enum class Kind : std::uint8_t { Other, Round, Commit };
  std::vector<Kind> kinds(lts.labels().size(), Kind::Other);
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const auto& l = lts.labels()[i];
    if (l.isSilent()) continue;
    if (l.gate() == roundGate) kinds[i] = Kind::Round;
    if (commitGates.count(l.gate())) kinds[i] = Kind::Commit;
  }
  auto step = [](std::uint8_t phase, Kind k) -> std::uint8_t {
    switch (k) {
      case Kind::Other:
        return phase;
      case Kind::Round:
        return phase == kOpen ? kError : kOpen;
      case Kind::Commit:
        return phase == kOpen ? kCommitted : kError;
    }
    return kError;
  };

  // parent[state * 3 + phase] is the transition that first reached the
  // product state; parentPhase holds the phase it came from.
  const std::size_t n = lts.numStates();
  PodArray<std::uint32_t> parent(n * 3, kUnset);
  PodArray<std::uint32_t> parentSource(n * 3, kUnset);
  PodArray<std::uint8_t> parentPhase(n * 3, kBefore);
  constexpr std::uint32_t kRoot = kUnset - 1;
  std::deque<std::pair<StateId, std::uint8_t>> queue;
  parent[lts.initial() * 3 + kBefore] = kRoot;
  queue.emplace_back(lts.initial(), kBefore);
  while (!queue.empty()) {
    const auto [s, phase] = queue.front();
    queue.pop_front();
    for (std::size_t t = lts.outBegin(s); t < lts.outEnd(s); ++t) {
      const std::uint8_t next = step(phase, kinds[lts.labelAt(t)]);
      if (next == kError) {
        SafetyReport report{false, {}};
        report.counterexample.push_back(lts.label(lts.labelAt(t)));
        std::size_t cur = std::size_t{s} * 3 + phase;
        while (parent[cur] != kRoot) {
          report.counterexample.push_back(lts.label(lts.labelAt(parent[cur])));
          cur = std::size_t{parentSource[cur]} * 3 + parentPhase[cur];
        }
        std::reverse(report.counterexample.begin(), report.counterexample.end());
        return report;
      }
      const std::size_t slot = std::size_t{lts.targetAt(t)} * 3 + next;
      if (parent[slot] == kUnset) {
        parent[slot] = static_cast<std::uint32_t>(t);
        parentSource[slot] = s;
        parentPhase[slot] = phase;
        queue.emplace_back(lts.targetAt(t), next);
      }
    }
  }
  return SafetyReport{};
}

}  // namespace bbacheck::lts
