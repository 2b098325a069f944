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

#ifndef BBACHECK_CALCULUS_HPP_
#define BBACHECK_CALCULUS_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bbacheck/error.hpp"
#include "bbacheck/rational.hpp"

/**
 * Probabilistic process calculus: action prefix, nondeterministic choice,
 * binary probabilistic choice, CSP-style parallel composition, restriction
 * and hiding, plus named recursive definitions.
 *
 * Terms are hash-consed inside an Environment, so a Term is a 32-bit handle
 * and structural equality is handle equality. Probabilistic choices are
 * reified as visible `prob(p)` transitions, which makes ordinary
 * bisimulation checking applicable to the explored system.
 */
namespace bbacheck::calculus {

using Nat = std::uint32_t;
using Value = std::variant<Nat, Rational>;

std::string renderValue(const Value& v);

// Gate names used by the consensus model.
namespace gates {
inline constexpr std::string_view kReceiveBlockProposal = "receive_block_proposal";
inline constexpr std::string_view kComputeBit = "compute_bit";
inline constexpr std::string_view kSelfVerify = "self_verify";
inline constexpr std::string_view kPropagate = "propagate";
inline constexpr std::string_view kSync = "sync";
inline constexpr std::string_view kAsk = "ask";
inline constexpr std::string_view kReply = "reply";
inline constexpr std::string_view kAdjustBit = "adjust_bit";
inline constexpr std::string_view kCommitProposedBlock = "commit_proposed_block";
inline constexpr std::string_view kCommitEmptyBlock = "commit_empty_block";
inline constexpr std::string_view kBoycott = "boycott";
inline constexpr std::string_view kProb = "prob";
}  // namespace gates

class InvalidLabel : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InvalidProbability : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class UnresolvedCall : public Error {
 public:
  using Error::Error;
};

class UnguardedRecursion : public Error {
 public:
  using Error::Error;
};

/**
 * Transition label: either the silent action or a gate with data arguments.
 *
 * Gates are lowercase identifiers; `i` is reserved for the silent action.
 * The model gates carry fixed signatures: propagate(node, bit), ask(bit),
 * reply(count), prob(probability); the other model gates take no arguments.
 */
class ActionLabel {
 public:
  ActionLabel() = default;  // silent

  static ActionLabel tau() { return ActionLabel(); }
  static ActionLabel visible(std::string gate, std::vector<Value> args = {});
  static ActionLabel prob(const Rational& p);

  bool isSilent() const { return gate_.empty(); }
  const std::string& gate() const { return gate_; }
  const std::vector<Value>& args() const { return args_; }

  bool operator==(const ActionLabel&) const = default;

  // Human-readable form, e.g. `propagate(1, 0)` or `tau`.
  std::string toString() const;
  std::size_t hash() const;

 private:
  std::string gate_;
  std::vector<Value> args_;
};

bool isValidGateName(std::string_view gate);

// Gate-name patterns; sync, hide and restrict sets never mention data.
using GateSet = std::set<std::string, std::less<>>;

enum class TermKind : std::uint8_t { Nil, Prefix, Choice, ProbChoice, Parallel, Restrict, Hide, Call };

struct Term {
  std::uint32_t id = 0;
  auto operator<=>(const Term&) const = default;
};

using LabelId = std::uint32_t;
using GateId = std::uint32_t;

inline constexpr LabelId kTauLabel = 0;
inline constexpr GateId kNoGate = 0xffffffffu;

/**
 * Interned node. Field meaning by kind:
 *   Prefix: a = label, b = continuation
 *   Choice: a = left, b = right
 *   ProbChoice: a = probability id, b = left, c = right
 *   Parallel: a = gate set, b = left, c = right
 *   Restrict, Hide: a = gate set, b = body
 *   Call: a = definition, b = argument tuple
 */
struct TermNode {
  TermKind kind = TermKind::Nil;
  std::uint32_t a = 0, b = 0, c = 0;
  bool operator==(const TermNode&) const = default;
};

/**
 * Owns the hash-consed terms, labels and the table of named definitions.
 *
 * A definition body is a builder invoked with concrete arguments when the
 * call is unfolded; this is where data-dependent guards are resolved.
 * All members are safe to call concurrently.
 */
struct EnvironmentAccess;

class Environment {
 public:
  using Body = std::function<Term(Environment&, std::span<const Value>)>;

  Environment();
  ~Environment();
  Environment(Environment&&) noexcept;
  Environment& operator=(Environment&&) noexcept;
  Environment(const Environment&) = delete;
  Environment& operator=(const Environment&) = delete;

  void define(std::string name, std::size_t arity, Body body);
  bool isDefined(std::string_view name) const;

  Term nil();
  Term prefix(const ActionLabel& label, Term cont);
  Term choice(Term left, Term right);
  // Left-nested sum; nil when empty.
  Term choice(std::span<const Term> summands);
  Term probChoice(const Rational& p, Term left, Term right);
  Term parallel(const GateSet& sync, Term left, Term right);
  Term restrict(const GateSet& gates, Term body);
  Term hide(const GateSet& gates, Term body);
  // Throws UnresolvedCall if `name` is not defined or the arity differs.
  Term call(std::string_view name, std::vector<Value> args);

  const TermNode& node(Term t) const;
  TermKind kind(Term t) const { return node(t).kind; }
  std::size_t termCount() const;

  LabelId internLabel(const ActionLabel& label);
  const ActionLabel& label(LabelId id) const;
  // kNoGate for the silent label.
  GateId gateOf(LabelId id) const;
  GateId internGate(std::string_view gate);
  const std::string& gateName(GateId id) const;
  bool gateSetContains(std::uint32_t setId, GateId gate) const;
  std::vector<std::string> gateSetNames(std::uint32_t setId) const;
  const Rational& probability(std::uint32_t probId) const;
  const std::string& definitionName(std::uint32_t defId) const;
  std::span<const Value> tuple(std::uint32_t tupleId) const;

  // Body of a Call node with arguments substituted (memoized).
  Term unfold(Term call);

  std::string toString(Term t, int depth = 6) const;

 private:
  friend struct EnvironmentAccess;
  struct Impl;
  Term intern(const TermNode& n);
  std::uint32_t internGateSet(const GateSet& gates);
  std::unique_ptr<Impl> impl_;
};

/**
 * One outgoing branch. Branches sharing `group` come from the same
 * probabilistic choice and are alternatives weighted by `weight`;
 * an ordinary transition is a singleton group of weight 1.
 */
struct Branch {
  LabelId label = kTauLabel;
  Term target;
  std::uint32_t group = 0;
  Rational weight{1};
};

struct Transition {
  LabelId label = kTauLabel;
  Term target;
  auto operator<=>(const Transition&) const = default;
};

// Every one-step derivative, sorted and duplicate-free.
std::vector<Transition> successors(Environment& env, Term t);

// Derivatives grouped by the choice that produced them; the grouping is
// what a probabilistic scheduler needs. Flattening gives `successors`.
// Group order follows the term structure, not interning history.
std::vector<Branch> moves(Environment& env, Term t);

// Gates in prefixes reachable through the definitions (hiding and
// restriction do not remove gates from the syntactic alphabet).
GateSet alphabet(Environment& env, Term t);

}  // namespace bbacheck::calculus

template <>
struct std::hash<bbacheck::calculus::ActionLabel> {
  std::size_t operator()(const bbacheck::calculus::ActionLabel& l) const { return l.hash(); }
};

template <>
struct std::hash<bbacheck::calculus::Term> {
  std::size_t operator()(const bbacheck::calculus::Term& t) const { return t.id; }
};

#endif  // BBACHECK_CALCULUS_HPP_
