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


#include <gtest/gtest.h>

#include <optional>
#include <set>

#include "bbacheck/montecarlo.hpp"
#include "markov_oracle.hpp"

namespace bbacheck::montecarlo {
namespace {

model::ModelParams small(model::Nat honest, model::Nat malicious) {
  model::ModelParams p;
  p.nHonest = honest;
  p.nMalicious = malicious;
  p.committeeSize = honest + malicious >= 2 ? 2 : 1;
  p.voteThreshold = 1;
  p.pIn = Rational(3, 4);
  return p;
}

TEST(Seeds, TrialSeedsAreDeterministicAndDistinct) {
  EXPECT_EQ(trialSeed(1, 5), trialSeed(1, 5));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(trialSeed(1, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(trialSeed(1, 0), trialSeed(2, 0));
}

TEST(Adversary, NamesRoundTrip) {
  for (const Adversary& a : {Adversary::never(), Adversary::always(), Adversary::probabilistic(0.25)}) {
    const Adversary b = Adversary::parse(a.name());
    EXPECT_EQ(b.kind, a.kind);
    EXPECT_DOUBLE_EQ(b.q, a.q);
  }
  EXPECT_EQ(Adversary::parse("never-boycott").kind, Adversary::Kind::Never);
  EXPECT_EQ(Adversary::parse("always-boycott").kind, Adversary::Kind::Always);
  EXPECT_THROW(Adversary::parse("sometimes"), InvalidArgument);
  EXPECT_THROW(Adversary::parse("probabilistic:1.5"), InvalidArgument);
  EXPECT_THROW(Adversary::probabilistic(-0.1), InvalidArgument);
}

// Nullopt when the round deadlocks.
template <class F>
std::optional<RoundOutcome> tryRound(F&& f) {
  try {
    return f();
  } catch (const Deadlock&) {
    return std::nullopt;
  }
}

TEST(Rounds, SameSeedSameOutcome) {
  const auto p = small(1, 1);
  Simulator sim(p);
  int completed = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto a = tryRound([&] { return sim.runRound(Adversary::probabilistic(0.5), seed); });
    const auto b = tryRound([&] { return runRound(p, Adversary::probabilistic(0.5), seed); });
    EXPECT_EQ(a, b) << "seed " << seed;
    if (a) {
      ++completed;
      EXPECT_GE(a->stepsTaken, 1u);
    }
  }
  EXPECT_GT(completed, 0);
}

TEST(Rounds, StepCapIsEnforced) {
  EXPECT_THROW(runRound(small(1, 0), Adversary::never(), 1, 0), StepCapExceeded);
}

TEST(Rounds, AlwaysBoycottCommitsEmpty) {
  Simulator sim(small(1, 1));
  int completed = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto r = tryRound([&] { return sim.runRound(Adversary::always(), seed); });
    if (!r) continue;
    ++completed;
    EXPECT_TRUE(r->boycotted);
    EXPECT_EQ(r->committed, Commit::Empty);
  }
  EXPECT_GT(completed, 0);
}

TEST(Rounds, NeverBoycottNeverBoycotts) {
  Simulator sim(small(1, 1));
  int completed = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto r = tryRound([&] { return sim.runRound(Adversary::never(), seed); });
    if (!r) continue;
    ++completed;
    EXPECT_FALSE(r->boycotted);
  }
  EXPECT_GT(completed, 0);
}

TEST(Rounds, DeadlockIsReported) {
  Simulator sim(small(1, 1));
  int deadlocked = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    if (!tryRound([&] { return sim.runRound(Adversary::never(), seed); })) ++deadlocked;
  }
  EXPECT_GT(deadlocked, 0);
}

TEST(Estimate, RejectsZeroTrials) {
  EXPECT_THROW(estimate(small(1, 0), Adversary::never(), 0, 1), InvalidArgument);
}

TEST(Estimate, CountsAreConsistentAndReproducible) {
  const auto p = small(2, 0);
  const SimStats a = estimate(p, Adversary::never(), 500, 3);
  const SimStats b = estimate(p, Adversary::never(), 500, 3);
  EXPECT_EQ(a.trials, 500u);
  EXPECT_EQ(a.completed + a.capExceeded + a.deadlocked, a.trials);
  EXPECT_EQ(a.proposed + a.empty, a.completed);
  ASSERT_GT(a.completed, 0u);
  EXPECT_GT(a.deadlocked, 0u);
  EXPECT_DOUBLE_EQ(a.fracProposed + a.fracEmpty, 1.0);
  EXPECT_EQ(a.proposed, b.proposed);
  EXPECT_EQ(a.deadlocked, b.deadlocked);
  EXPECT_DOUBLE_EQ(a.meanSteps, b.meanSteps);
  EXPECT_EQ(a.seed, 3u);
}

TEST(Estimate, MatchesMarkovOracleGivenCommit) {
  const auto p = small(2, 0);
  const auto exact = testing::roundProbabilities(p);
  const SimStats s = estimate(p, Adversary::never(), 20000, 11);
  ASSERT_GT(s.completed, 1000u);
  EXPECT_NEAR(s.fracProposed, exact.proposedGivenCommit(), 0.03);
}

TEST(Estimate, LoneNodeNeverCommits) {
  const SimStats s = estimate(small(1, 0), Adversary::never(), 3, 1, 200);
  EXPECT_EQ(s.completed, 0u);
  EXPECT_EQ(s.capExceeded, 3u);
}

TEST(Estimate, OracleDeadlockMassMatches) {
  const auto p = small(2, 0);
  const auto exact = testing::roundProbabilities(p);
  EXPECT_NEAR(exact.proposed + exact.empty + exact.deadlock, 1.0, 1e-9);
  const SimStats s = estimate(p, Adversary::never(), 4000, 5);
  EXPECT_NEAR(static_cast<double>(s.deadlocked) / s.trials, exact.deadlock, 0.03);
}

TEST(Json, FieldOrder) {
  const auto p = small(1, 1);
  const SimStats s = estimate(p, Adversary::always(), 20, 9);
  const std::string line = toJsonLine(p, Adversary::always(), s);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  std::size_t pos = 0;
  for (const char* key : {"nHonest", "nMalicious", "committeeSize", "voteThreshold", "pIn", "pZero", "adversary",
                          "trials", "completed", "capExceeded", "deadlocked", "fracProposed", "fracEmpty",
                          "fracBoycotted", "meanSteps", "seed"}) {
    const auto at = line.find(std::string("\"") + key + "\":", pos);
    ASSERT_NE(at, std::string::npos) << key;
    pos = at;
  }
  EXPECT_NE(line.find("\"always-boycott\""), std::string::npos);
}

}  // namespace
}  // namespace bbacheck::montecarlo
