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

#ifndef BBACHECK_MONTECARLO_HPP_
#define BBACHECK_MONTECARLO_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "bbacheck/error.hpp"
#include "bbacheck/model.hpp"

namespace bbacheck::montecarlo {

// Resolves the malicious group's boycott decision, once per round.
struct Adversary {
  enum class Kind { Never, Always, Probabilistic };
  Kind kind = Kind::Never;
  double q = 0.0;  // boycott probability for Probabilistic

  static Adversary never() { return {Kind::Never, 0.0}; }
  static Adversary always() { return {Kind::Always, 1.0}; }
  static Adversary probabilistic(double q);

  // "never-boycott", "always-boycott" or "probabilistic:<q>".
  std::string name() const;
  static Adversary parse(std::string_view text);
};

enum class Commit { Proposed, Empty };
std::string_view commitName(Commit c);

struct RoundOutcome {
  Commit committed = Commit::Empty;
  std::uint32_t stepsTaken = 0;  // sync actions before the commit
  bool boycotted = false;
  friend bool operator==(const RoundOutcome&, const RoundOutcome&) = default;
};

inline constexpr std::uint32_t kDefaultStepCap = 10'000;

class StepCapExceeded : public Error {
 public:
  explicit StepCapExceeded(std::uint32_t cap);
};

class Deadlock : public Error {
 public:
  Deadlock();
};

// Per-trial seed derived from the master seed by SplitMix64.
std::uint64_t trialSeed(std::uint64_t master, std::uint64_t trial);

/**
 * Samples single rounds of the model. Probabilistic choices follow their
 * weights; every other choice picks uniformly among the distinct enabled
 * move groups. A round ends at the first commit.
 */
class Simulator {
 public:
  explicit Simulator(const model::ModelParams& params);

  RoundOutcome runRound(const Adversary& adversary, std::uint64_t seed, std::uint32_t stepCap = kDefaultStepCap);

 private:
  model::Model model_;
  calculus::Term initial_;
};

RoundOutcome runRound(const model::ModelParams& params, const Adversary& adversary, std::uint64_t seed,
                      std::uint32_t stepCap = kDefaultStepCap);

struct SimStats {
  std::uint64_t trials = 0;       // requested
  std::uint64_t completed = 0;    // reached a commit
  std::uint64_t capExceeded = 0;  // excluded
  std::uint64_t deadlocked = 0;   // excluded
  std::uint64_t proposed = 0, empty = 0, boycotted = 0;
  double fracProposed = 0.0, fracEmpty = 0.0, fracBoycotted = 0.0;
  double meanSteps = 0.0;
  std::uint64_t seed = 0;
};

// Throws InvalidArgument when trials is zero.
SimStats estimate(const model::ModelParams& params, const Adversary& adversary, std::uint64_t trials,
                  std::uint64_t seed, std::uint32_t stepCap = kDefaultStepCap);

// One JSON object with fields in this order: nHonest, nMalicious,
// committeeSize, voteThreshold, pIn, pZero, adversary, trials, completed,
// capExceeded, deadlocked, fracProposed, fracEmpty, fracBoycotted,
// meanSteps, seed.
std::string toJsonLine(const model::ModelParams& params, const Adversary& adversary, const SimStats& stats);

}  // namespace bbacheck::montecarlo

#endif  // BBACHECK_MONTECARLO_HPP_
