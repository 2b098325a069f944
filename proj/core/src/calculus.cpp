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

#include "bbacheck/calculus.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "bbacheck/stable_vector.hpp"

namespace bbacheck::calculus {

using detail::StableVector;

std::string renderValue(const Value& v) {
  if (const Nat* n = std::get_if<Nat>(&v)) return std::to_string(*n);
  return std::get<Rational>(v).toString();
}

bool isValidGateName(std::string_view gate) {
  if (gate.empty() || gate == "i") return false;
  if (!(gate.front() == '_' || (gate.front() >= 'a' && gate.front() <= 'z'))) return false;
  return std::all_of(gate.begin(), gate.end(), [](char c) {
    return c == '_' || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
  });
}

namespace {

bool isBit(const Value& v) {
  const Nat* n = std::get_if<Nat>(&v);
  return n != nullptr && *n <= 1;
}

bool isNat(const Value& v) { return std::holds_alternative<Nat>(v); }

void requireSignature(const std::string& gate, const std::vector<Value>& args) {
  auto fail = [&](const char* what) {
    throw InvalidLabel("gate '" + gate + "' " + what);
  };
  if (gate == gates::kPropagate) {
    if (args.size() != 2 || !isNat(args[0]) || !isBit(args[1])) fail("takes (node, bit)");
  } else if (gate == gates::kAsk) {
    if (args.size() != 1 || !isBit(args[0])) fail("takes (bit)");
  } else if (gate == gates::kReply) {
    if (args.size() != 1 || !isNat(args[0])) fail("takes (count)");
  } else if (gate == gates::kProb) {
    if (args.size() != 1 || !std::holds_alternative<Rational>(args[0]) ||
        !isProbability(std::get<Rational>(args[0]))) {
      fail("takes (probability in (0,1])");
    }
  } else if (gate == gates::kReceiveBlockProposal || gate == gates::kComputeBit ||
             gate == gates::kSelfVerify || gate == gates::kSync || gate == gates::kAdjustBit ||
             gate == gates::kCommitProposedBlock || gate == gates::kCommitEmptyBlock ||
             gate == gates::kBoycott) {
    if (!args.empty()) fail("takes no arguments");
  }
}

inline std::uint64_t mix(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

std::uint64_t hashNode(const TermNode& n) {
  std::uint64_t h = mix(static_cast<std::uint64_t>(n.kind) * 0x9e3779b97f4a7c15ULL + n.a);
  h = mix(h ^ (static_cast<std::uint64_t>(n.b) << 32 | n.c));
  return h;
}

struct ValuesHash {
  std::size_t operator()(const std::vector<Value>& vs) const {
    std::size_t h = vs.size();
    for (const Value& v : vs) {
      std::size_t e = std::visit([](const auto& x) { return std::hash<std::decay_t<decltype(x)>>{}(x); }, v);
      h = mix(h * 31 + e + v.index());
    }
    return h;
  }
};

}  // namespace

ActionLabel ActionLabel::visible(std::string gate, std::vector<Value> args) {
  if (!isValidGateName(gate)) throw InvalidLabel("invalid gate name '" + gate + "'");
  requireSignature(gate, args);
  ActionLabel l;
  l.gate_ = std::move(gate);
  l.args_ = std::move(args);
  return l;
}

ActionLabel ActionLabel::prob(const Rational& p) {
  return visible(std::string(gates::kProb), {Value(p)});
}

std::string ActionLabel::toString() const {
  if (isSilent()) return "tau";
  if (args_.empty()) return gate_;
  std::string out = gate_ + "(";
  for (std::size_t i = 0; i < args_.size(); ++i) {
    if (i) out += ", ";
    out += renderValue(args_[i]);
  }
  return out + ")";
}

std::size_t ActionLabel::hash() const {
  return mix(std::hash<std::string>{}(gate_) ^ (ValuesHash{}(args_) << 1));
}

// ---------------------------------------------------------------------------

struct Environment::Impl {
  struct Definition {
    std::string name;
    std::size_t arity = 0;
    Body body;
  };

  mutable std::mutex mu;

  StableVector<TermNode> nodes;
  std::vector<std::uint32_t> table;  // open addressing; slot holds id + 1
  std::size_t tableUsed = 0;

  StableVector<ActionLabel> labels;
  StableVector<GateId> labelGate;
  std::unordered_map<ActionLabel, LabelId> labelIndex;

  StableVector<std::string> gateNames;
  std::unordered_map<std::string, GateId> gateIndex;

  StableVector<std::vector<GateId>> gateSets;
  std::map<std::vector<GateId>, std::uint32_t> gateSetIndex;

  StableVector<Rational> probs;
  StableVector<std::pair<LabelId, LabelId>> probLabels;
  std::unordered_map<Rational, std::uint32_t> probIndex;

  StableVector<std::vector<Value>> tuples;
  std::unordered_map<std::vector<Value>, std::uint32_t, ValuesHash> tupleIndex;

  StableVector<Definition> defs;
  std::unordered_map<std::string, std::uint32_t> defIndex;

  std::unordered_map<std::uint32_t, std::uint32_t> unfolded;

  void grow() {
    std::vector<std::uint32_t> next(table.empty() ? 1024 : table.size() * 2, 0);
    const std::size_t mask = next.size() - 1;
    for (std::uint32_t slot : table) {
      if (slot == 0) continue;
      std::size_t pos = hashNode(nodes[slot - 1]) & mask;
      while (next[pos] != 0) pos = (pos + 1) & mask;
      next[pos] = slot;
    }
    table.swap(next);
  }

  // Caller holds mu.
  std::uint32_t internNode(const TermNode& n) {
    if ((tableUsed + 1) * 2 > table.size()) grow();
    const std::size_t mask = table.size() - 1;
    std::size_t pos = hashNode(n) & mask;
    while (table[pos] != 0) {
      if (nodes[table[pos] - 1] == n) return table[pos] - 1;
      pos = (pos + 1) & mask;
    }
    const auto id = static_cast<std::uint32_t>(nodes.push_back(n));
    table[pos] = id + 1;
    ++tableUsed;
    return id;
  }

  // Caller holds mu.
  GateId gateLocked(std::string_view gate) {
    auto it = gateIndex.find(std::string(gate));
    if (it != gateIndex.end()) return it->second;
    const auto id = static_cast<GateId>(gateNames.push_back(std::string(gate)));
    gateIndex.emplace(std::string(gate), id);
    return id;
  }

  // Caller holds mu.
  LabelId labelLocked(const ActionLabel& l) {
    auto it = labelIndex.find(l);
    if (it != labelIndex.end()) return it->second;
    const GateId g = l.isSilent() ? kNoGate : gateLocked(l.gate());
    const auto id = static_cast<LabelId>(labels.push_back(l));
    labelGate.push_back(g);
    labelIndex.emplace(l, id);
    return id;
  }
};

Environment::Environment() : impl_(std::make_unique<Impl>()) {
  impl_->labelLocked(ActionLabel::tau());
  impl_->internNode(TermNode{});
}

Environment::~Environment() = default;
Environment::Environment(Environment&&) noexcept = default;
Environment& Environment::operator=(Environment&&) noexcept = default;

void Environment::define(std::string name, std::size_t arity, Body body) {
  std::lock_guard lock(impl_->mu);
  if (impl_->defIndex.count(name)) throw InvalidArgument("duplicate definition '" + name + "'");
  const auto id = static_cast<std::uint32_t>(impl_->defs.size());
  impl_->defIndex.emplace(name, id);
  impl_->defs.push_back(Impl::Definition{std::move(name), arity, std::move(body)});
}

bool Environment::isDefined(std::string_view name) const {
  std::lock_guard lock(impl_->mu);
  return impl_->defIndex.count(std::string(name)) != 0;
}

Term Environment::intern(const TermNode& n) {
  std::lock_guard lock(impl_->mu);
  return Term{impl_->internNode(n)};
}

Term Environment::nil() { return Term{0}; }

Term Environment::prefix(const ActionLabel& label, Term cont) {
  return intern(TermNode{TermKind::Prefix, internLabel(label), cont.id, 0});
}

Term Environment::choice(Term left, Term right) {
  return intern(TermNode{TermKind::Choice, left.id, right.id, 0});
}

Term Environment::choice(std::span<const Term> summands) {
  if (summands.empty()) return nil();
  Term acc = summands.front();
  for (std::size_t i = 1; i < summands.size(); ++i) acc = choice(acc, summands[i]);
  return acc;
}

Term Environment::probChoice(const Rational& p, Term left, Term right) {
  if (!isProbability(p)) {
    throw InvalidProbability("probabilistic choice weight " + p.toString() + " outside (0,1]");
  }
  std::uint32_t probId;
  {
    std::lock_guard lock(impl_->mu);
    auto it = impl_->probIndex.find(p);
    if (it != impl_->probIndex.end()) {
      probId = it->second;
    } else {
      probId = static_cast<std::uint32_t>(impl_->probs.push_back(p));
      impl_->probIndex.emplace(p, probId);
      const LabelId l = impl_->labelLocked(ActionLabel::prob(p));
      const LabelId r = p == Rational(1) ? l : impl_->labelLocked(ActionLabel::prob(Rational(1) - p));
      impl_->probLabels.push_back({l, r});
    }
  }
  return intern(TermNode{TermKind::ProbChoice, probId, left.id, right.id});
}

std::uint32_t Environment::internGateSet(const GateSet& gates) {
  std::vector<GateId> ids;
  ids.reserve(gates.size());
  std::lock_guard lock(impl_->mu);
  for (const std::string& g : gates) {
    if (!isValidGateName(g)) throw InvalidLabel("invalid gate name '" + g + "' in gate set");
    ids.push_back(impl_->gateLocked(g));
  }
  std::sort(ids.begin(), ids.end());
  auto it = impl_->gateSetIndex.find(ids);
  if (it != impl_->gateSetIndex.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(impl_->gateSets.push_back(ids));
  impl_->gateSetIndex.emplace(std::move(ids), id);
  return id;
}

Term Environment::parallel(const GateSet& sync, Term left, Term right) {
  return intern(TermNode{TermKind::Parallel, internGateSet(sync), left.id, right.id});
}

Term Environment::restrict(const GateSet& gates, Term body) {
  return intern(TermNode{TermKind::Restrict, internGateSet(gates), body.id, 0});
}

Term Environment::hide(const GateSet& gates, Term body) {
  return intern(TermNode{TermKind::Hide, internGateSet(gates), body.id, 0});
}

Term Environment::call(std::string_view name, std::vector<Value> args) {
  std::uint32_t defId, tupleId;
  {
    std::lock_guard lock(impl_->mu);
    auto it = impl_->defIndex.find(std::string(name));
    if (it == impl_->defIndex.end()) {
      throw UnresolvedCall("call to undefined process '" + std::string(name) + "'");
    }
    defId = it->second;
    if (impl_->defs[defId].arity != args.size()) {
      throw UnresolvedCall("process '" + std::string(name) + "' expects " +
                           std::to_string(impl_->defs[defId].arity) + " arguments, got " +
                           std::to_string(args.size()));
    }
    auto t = impl_->tupleIndex.find(args);
    if (t != impl_->tupleIndex.end()) {
      tupleId = t->second;
    } else {
      tupleId = static_cast<std::uint32_t>(impl_->tuples.push_back(args));
      impl_->tupleIndex.emplace(std::move(args), tupleId);
    }
  }
  return intern(TermNode{TermKind::Call, defId, tupleId, 0});
}

const TermNode& Environment::node(Term t) const { return impl_->nodes[t.id]; }

std::size_t Environment::termCount() const {
  std::lock_guard lock(impl_->mu);
  return impl_->nodes.size();
}

LabelId Environment::internLabel(const ActionLabel& label) {
  std::lock_guard lock(impl_->mu);
  return impl_->labelLocked(label);
}

const ActionLabel& Environment::label(LabelId id) const { return impl_->labels[id]; }

GateId Environment::gateOf(LabelId id) const { return impl_->labelGate[id]; }

GateId Environment::internGate(std::string_view gate) {
  std::lock_guard lock(impl_->mu);
  return impl_->gateLocked(gate);
}

const std::string& Environment::gateName(GateId id) const { return impl_->gateNames[id]; }

bool Environment::gateSetContains(std::uint32_t setId, GateId gate) const {
  if (gate == kNoGate) return false;
  const auto& s = impl_->gateSets[setId];
  return std::binary_search(s.begin(), s.end(), gate);
}

std::vector<std::string> Environment::gateSetNames(std::uint32_t setId) const {
  std::vector<std::string> out;
  for (GateId g : impl_->gateSets[setId]) out.push_back(gateName(g));
  std::sort(out.begin(), out.end());
  return out;
}

const Rational& Environment::probability(std::uint32_t probId) const { return impl_->probs[probId]; }

const std::string& Environment::definitionName(std::uint32_t defId) const {
  return impl_->defs[defId].name;
}

std::span<const Value> Environment::tuple(std::uint32_t tupleId) const {
  const auto& t = impl_->tuples[tupleId];
  return {t.data(), t.size()};
}

Term Environment::unfold(Term call) {
  const TermNode& n = node(call);
  if (n.kind != TermKind::Call) return call;
  {
    std::lock_guard lock(impl_->mu);
    auto it = impl_->unfolded.find(call.id);
    if (it != impl_->unfolded.end()) return Term{it->second};
  }
  const Impl::Definition& def = impl_->defs[n.a];
  const Term body = def.body(*this, tuple(n.b));
  std::lock_guard lock(impl_->mu);
  impl_->unfolded.emplace(call.id, body.id);
  return body;
}

std::string Environment::toString(Term t, int depth) const {
  if (depth <= 0) return "...";
  const TermNode& n = node(t);
  auto sets = [this](std::uint32_t id) {
    std::string s = "{";
    bool first = true;
    for (const auto& g : gateSetNames(id)) {
      if (!first) s += ",";
      s += g;
      first = false;
    }
    return s + "}";
  };
  switch (n.kind) {
    case TermKind::Nil:
      return "nil";
    case TermKind::Prefix:
      return label(n.a).toString() + "." + toString(Term{n.b}, depth - 1);
    case TermKind::Choice:
      return "(" + toString(Term{n.a}, depth - 1) + " + " + toString(Term{n.b}, depth - 1) + ")";
    case TermKind::ProbChoice:
      return "([" + probability(n.a).toString() + "]" + toString(Term{n.b}, depth - 1) + " (+) " +
             toString(Term{n.c}, depth - 1) + ")";
    case TermKind::Parallel:
      return "(" + toString(Term{n.b}, depth - 1) + " |" + sets(n.a) + "| " +
             toString(Term{n.c}, depth - 1) + ")";
    case TermKind::Restrict:
      return "(" + toString(Term{n.b}, depth - 1) + ")\\" + sets(n.a);
    case TermKind::Hide:
      return "(" + toString(Term{n.b}, depth - 1) + ")/" + sets(n.a);
    case TermKind::Call: {
      std::string s = definitionName(n.a) + "(";
      auto args = tuple(n.b);
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) s += ",";
        s += renderValue(args[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Structural operational semantics.

struct EnvironmentAccess {
  static std::pair<LabelId, LabelId> probLabels(const Environment& env, std::uint32_t probId) {
    return env.impl_->probLabels[probId];
  }
  static Term rebuild(Environment& env, TermKind kind, std::uint32_t a, Term b, Term c = Term{0}) {
    return env.intern(TermNode{kind, a, b.id, c.id});
  }
};

namespace {

class Deriver {
 public:
  explicit Deriver(Environment& env) : env_(env) {}

  // Appends the branches of `t`, numbering fresh groups from `nextGroup`.
  void collect(Term t, std::vector<Branch>& out, std::uint32_t& nextGroup) {
    const TermNode n = env_.node(t);
    switch (n.kind) {
      case TermKind::Nil:
        return;
      case TermKind::Prefix:
        out.push_back(Branch{n.a, Term{n.b}, nextGroup++, Rational(1)});
        return;
      case TermKind::Choice:
        collect(Term{n.a}, out, nextGroup);
        collect(Term{n.b}, out, nextGroup);
        return;
      case TermKind::ProbChoice: {
        const Rational& p = env_.probability(n.a);
        const auto [left, right] = EnvironmentAccess::probLabels(env_, n.a);
        const std::uint32_t g = nextGroup++;
        out.push_back(Branch{left, Term{n.b}, g, p});
        if (p != Rational(1)) out.push_back(Branch{right, Term{n.c}, g, Rational(1) - p});
        return;
      }
      case TermKind::Parallel:
        collectParallel(n, out, nextGroup);
        return;
      case TermKind::Restrict: {
        std::vector<Branch> inner;
        std::uint32_t g = 0;
        collect(Term{n.b}, inner, g);
        const std::uint32_t base = nextGroup;
        for (Branch& br : inner) {
          if (env_.gateSetContains(n.a, env_.gateOf(br.label))) continue;
          br.target = EnvironmentAccess::rebuild(env_, TermKind::Restrict, n.a, br.target);
          br.group += base;
          out.push_back(std::move(br));
        }
        nextGroup = base + g;
        return;
      }
      case TermKind::Hide: {
        std::vector<Branch> inner;
        std::uint32_t g = 0;
        collect(Term{n.b}, inner, g);
        const std::uint32_t base = nextGroup;
        for (Branch& br : inner) {
          if (env_.gateSetContains(n.a, env_.gateOf(br.label))) br.label = kTauLabel;
          br.target = EnvironmentAccess::rebuild(env_, TermKind::Hide, n.a, br.target);
          br.group += base;
          out.push_back(std::move(br));
        }
        nextGroup = base + g;
        return;
      }
      case TermKind::Call: {
        if (std::find(stack_.begin(), stack_.end(), t.id) != stack_.end()) {
          throw UnguardedRecursion("unguarded recursion through '" + env_.toString(t, 2) + "'");
        }
        stack_.push_back(t.id);
        collect(env_.unfold(t), out, nextGroup);
        stack_.pop_back();
        return;
      }
    }
  }

 private:
  void collectParallel(const TermNode& n, std::vector<Branch>& out, std::uint32_t& nextGroup) {
    const Term left{n.b}, right{n.c};
    std::vector<Branch> lhs, rhs;
    std::uint32_t gl = 0, gr = 0;
    collect(left, lhs, gl);
    collect(right, rhs, gr);

    const std::uint32_t baseL = nextGroup;
    const std::uint32_t baseR = baseL + gl;
    std::uint32_t fresh = baseR + gr;

    std::vector<const Branch*> syncL, syncR;
    for (const Branch& br : lhs) {
      if (env_.gateSetContains(n.a, env_.gateOf(br.label))) {
        syncL.push_back(&br);
        continue;
      }
      out.push_back(Branch{br.label,
                           EnvironmentAccess::rebuild(env_, TermKind::Parallel, n.a, br.target, right),
                           baseL + br.group, br.weight});
    }
    for (const Branch& br : rhs) {
      if (env_.gateSetContains(n.a, env_.gateOf(br.label))) {
        syncR.push_back(&br);
        continue;
      }
      out.push_back(Branch{br.label,
                           EnvironmentAccess::rebuild(env_, TermKind::Parallel, n.a, left, br.target),
                           baseR + br.group, br.weight});
    }
    for (const Branch* l : syncL) {
      for (const Branch* r : syncR) {
        if (l->label != r->label) continue;
        out.push_back(Branch{l->label,
                             EnvironmentAccess::rebuild(env_, TermKind::Parallel, n.a, l->target, r->target),
                             fresh++, Rational(1)});
      }
    }
    nextGroup = fresh;
  }

  Environment& env_;
  std::vector<std::uint32_t> stack_;
};

}  // namespace

std::vector<Transition> successors(Environment& env, Term t) {
  std::vector<Branch> branches;
  std::uint32_t groups = 0;
  Deriver(env).collect(t, branches, groups);
  std::vector<Transition> out;
  out.reserve(branches.size());
  for (const Branch& b : branches) out.push_back(Transition{b.label, b.target});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Branch> moves(Environment& env, Term t) {
  std::vector<Branch> branches;
  std::uint32_t groups = 0;
  Deriver(env).collect(t, branches, groups);

  // One entry per distinct group, in derivation order. Term and label ids
  // depend on interning history, so they serve only as dedup keys.
  std::map<std::uint32_t, std::vector<Branch>> byGroup;
  for (Branch& b : branches) byGroup[b.group].push_back(std::move(b));
  using Key = std::vector<std::tuple<LabelId, std::uint32_t, Rational>>;
  std::set<Key> seen;
  std::vector<Branch> out;
  std::uint32_t g = 0;
  for (auto& [index, bs] : byGroup) {
    Key key;
    for (const Branch& b : bs) key.emplace_back(b.label, b.target.id, b.weight);
    std::sort(key.begin(), key.end());
    if (!seen.insert(std::move(key)).second) continue;
    for (Branch& b : bs) {
      b.group = g;
      out.push_back(std::move(b));
    }
    ++g;
  }
  return out;
}

GateSet alphabet(Environment& env, Term t) {
  GateSet out;
  std::unordered_set<std::uint32_t> seen;
  std::vector<Term> work{t};
  while (!work.empty()) {
    const Term cur = work.back();
    work.pop_back();
    if (!seen.insert(cur.id).second) continue;
    const TermNode n = env.node(cur);
    switch (n.kind) {
      case TermKind::Nil:
        break;
      case TermKind::Prefix:
        if (!env.label(n.a).isSilent()) out.insert(env.label(n.a).gate());
        work.push_back(Term{n.b});
        break;
      case TermKind::Choice:
        work.push_back(Term{n.a});
        work.push_back(Term{n.b});
        break;
      case TermKind::ProbChoice:
        out.insert(std::string(gates::kProb));
        work.push_back(Term{n.b});
        work.push_back(Term{n.c});
        break;
      case TermKind::Parallel:
        work.push_back(Term{n.b});
        work.push_back(Term{n.c});
        break;
      case TermKind::Restrict:
      case TermKind::Hide:
        work.push_back(Term{n.b});
        break;
      case TermKind::Call:
        work.push_back(env.unfold(cur));
        break;
    }
  }
  return out;
}

}  // namespace bbacheck::calculus
