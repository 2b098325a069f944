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

#ifndef BBACHECK_MODEL_HPP_
#define BBACHECK_MODEL_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bbacheck/calculus.hpp"
#include "bbacheck/rational.hpp"

namespace bbacheck::model {

using calculus::Nat;

/**
 * Population and protocol constants.
 *
 * Unset optional fields are derived: the vote threshold is the ceiling of
 * two thirds of the committee size, pIn is committee size over population
 * and pZero is pH(hFraction).
 */
struct ModelParams {
  Nat nHonest = 4;
  Nat nMalicious = 0;
  Nat committeeSize = 3;
  std::optional<Nat> voteThreshold;
  std::optional<Rational> pIn;
  Rational hFraction{4, 5};
  std::optional<Rational> pZero;

  Nat total() const { return nHonest + nMalicious; }
  Nat threshold() const;
  Rational inProbability() const;
  Rational zeroProbability() const;

  // Throws InvalidArgument when an invariant is violated.
  void validate() const;
  std::string describe() const;
};

// Applies `key = value` lines ('#' starts a comment) on top of `base`.
// Keys: nHonest, nMalicious, committeeSize, voteThreshold, pIn, hFraction, pZero.
ModelParams parseConfig(std::string_view text, ModelParams base = {});
ModelParams loadConfigFile(const std::string& path, ModelParams base = {});

// h^2 (1 + h - h^2), exactly.
Rational pH(const Rational& h);
// c / n, exactly.
Rational pV(Nat c, Nat n);

enum class StepClass : Nat { Init = 0, Zero = 1, One = 2, Two = 3 };
const char* stepName(StepClass s);

// How a node behaves within the current round.
enum class Role : Nat {
  Honest = 0,
  // Malicious node that declined to boycott: honest steps, malicious restart.
  Cooperating = 1,
  // Boycotting malicious node: every vote is for bit 1.
  Boycotting = 2,
};

// Per-node slice of a network state.
struct NodeView {
  Nat id = 0;
  bool malicious = false;
  // Definition currently driving the behavior component, or empty while
  // it is in the middle of a prefix chain.
  std::string behavior;
  std::vector<calculus::Value> behaviorArgs;
  Nat k0 = 0;
  Nat k1 = 0;
};

/**
 * Owns an environment populated with the node, counter and network
 * definitions for one parameter set.
 *
 * Honest ids are 1..nHonest, malicious ids follow.
 */
class Model {
 public:
  explicit Model(ModelParams params);

  const ModelParams& params() const { return params_; }
  calculus::Environment& env() { return env_; }

  calculus::Term counter(Nat id, Nat k0 = 0, Nat k1 = 0);
  // A node composed with its own counter.
  calculus::Term honestNode(Nat id);
  calculus::Term maliciousNode(Nat id);
  calculus::Term network();

  // Throws InvalidArgument if `state` is not a network state of this model.
  std::vector<NodeView> inspect(calculus::Term state) const;

  static const calculus::GateSet& roundGates();
  static const calculus::GateSet& nodeGates();

 private:
  void install();
  void checkId(Nat id, bool malicious) const;

  ModelParams params_;
  calculus::Environment env_;
};

}  // namespace bbacheck::model

#endif  // BBACHECK_MODEL_HPP_
