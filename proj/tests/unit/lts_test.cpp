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

#include <random>
#include <set>

#include "bbacheck/lts.hpp"
#include "random_lts.hpp"

namespace bbacheck::lts {
namespace {

using calculus::Term;

ActionLabel vis(const char* g) { return ActionLabel::visible(g); }

// 0 -a-> 1 -b-> 2
Lts chain() { return Lts(3, 0, {vis("a"), vis("b")}, {{0, 0, 1}, {1, 1, 2}}); }

TEST(Lts, ConstructorValidatesAndDeduplicates) {
  const Lts l(2, 0, {vis("a"), vis("a")}, {{0, 0, 1}, {0, 1, 1}, {0, 0, 1}});
  EXPECT_EQ(l.numTransitions(), 1u);
  EXPECT_THROW(Lts(2, 2, {vis("a")}, {}), InvalidArgument);
  EXPECT_THROW(Lts(2, 0, {vis("a")}, {{0, 0, 2}}), InvalidArgument);
  EXPECT_THROW(Lts(2, 0, {vis("a")}, {{0, 1, 1}}), InvalidArgument);
}

TEST(Lts, EqualityIsOnTransitionSets) {
  const Lts a(2, 0, {vis("a"), vis("b")}, {{0, 0, 1}, {0, 1, 1}});
  const Lts b(2, 0, {vis("b"), vis("a")}, {{0, 0, 1}, {0, 1, 1}});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, chain());
}

TEST(Lts, BuilderInternsLabels) {
  LtsBuilder b(2);
  b.addTransition(0, vis("a"), 1);
  b.addTransition(1, vis("a"), 0);
  const Lts l = std::move(b).build();
  EXPECT_EQ(l.labels().size(), 1u);
  EXPECT_EQ(l.numTransitions(), 2u);
}

class ExploreTest : public ::testing::Test {
 protected:
  calculus::Environment env;
};

TEST_F(ExploreTest, Prefix) {
  const Lts l = explore(env, env.prefix(vis("a"), env.nil()));
  EXPECT_EQ(l.numStates(), 2u);
  EXPECT_EQ(l.numTransitions(), 1u);
  EXPECT_EQ(l.initial(), 0u);
}

TEST_F(ExploreTest, ProbabilisticChoice) {
  const Lts l = explore(env, env.probChoice(Rational(3, 4), env.prefix(vis("a"), env.nil()),
                                            env.prefix(vis("b"), env.nil())));
  EXPECT_EQ(l.numStates(), 4u);
  EXPECT_EQ(l.numTransitions(), 4u);
}

TEST_F(ExploreTest, EveryStateReachable) {
  const Term t = env.parallel({}, env.prefix(vis("a"), env.nil()), env.prefix(vis("b"), env.nil()));
  const Lts l = explore(env, t);
  EXPECT_EQ(l.numStates(), 4u);
  EXPECT_TRUE(l.allReachable());
}

TEST_F(ExploreTest, TransitionsMatchSuccessors) {
  const Term t = env.parallel({"s"}, env.choice(env.prefix(vis("s"), env.nil()), env.prefix(vis("a"), env.nil())),
                              env.prefix(vis("s"), env.prefix(vis("b"), env.nil())));
  const Exploration ex = exploreWithTerms(env, t);
  for (StateId s = 0; s < ex.lts.numStates(); ++s) {
    std::set<std::pair<std::string, std::uint32_t>> fromLts, fromTerms;
    for (std::size_t i = ex.lts.outBegin(s); i < ex.lts.outEnd(s); ++i) {
      fromLts.emplace(ex.lts.label(ex.lts.labelAt(i)).toString(), ex.stateTerms[ex.lts.targetAt(i)].id);
    }
    for (const auto& tr : calculus::successors(env, ex.stateTerms[s])) {
      fromTerms.emplace(env.label(tr.label).toString(), tr.target.id);
    }
    EXPECT_EQ(fromLts, fromTerms) << "state " << s;
  }
}

TEST_F(ExploreTest, Deterministic) {
  const Term t = env.parallel({}, env.prefix(vis("a"), env.prefix(vis("c"), env.nil())),
                              env.choice(env.prefix(vis("b"), env.nil()), env.prefix(vis("c"), env.nil())));
  const Lts a = explore(env, t);
  const Lts b = explore(env, t);
  EXPECT_EQ(a.transitions(), b.transitions());
}

TEST_F(ExploreTest, LimitsAreEnforced) {
  const Term t = env.parallel({}, env.prefix(vis("a"), env.nil()), env.prefix(vis("b"), env.nil()));
  try {
    explore(env, t, ExploreLimits{2, 100});
    FAIL() << "expected LimitExceeded";
  } catch (const LimitExceeded& e) {
    EXPECT_EQ(e.kind(), LimitExceeded::Kind::MaxStates);
    EXPECT_STREQ(e.limitName(), "maxStates");
  }
  EXPECT_THROW(explore(env, t, ExploreLimits{100, 2}), LimitExceeded);
  EXPECT_THROW(explore(env, t, ExploreLimits{0, 2}), InvalidArgument);
}

TEST(Hide, MakesGateSilent) {
  const Lts l(2, 0, {vis("a")}, {{0, 0, 1}});
  const Lts h = hideLabels(l, {"a"});
  EXPECT_EQ(h.numStates(), 2u);
  ASSERT_EQ(h.numTransitions(), 1u);
  EXPECT_TRUE(h.label(h.labelAt(0)).isSilent());
}

TEST(Hide, EmptySetIsIdentity) { EXPECT_EQ(hideLabels(chain(), {}), chain()); }

TEST(Hide, MergesTransitionsThatBecomeEqual) {
  const Lts l(2, 0, {vis("a"), vis("b")}, {{0, 0, 1}, {0, 1, 1}});
  EXPECT_EQ(hideLabels(l, {"a", "b"}).numTransitions(), 1u);
}

TEST(Cut, RemovesGateAndUnreachableStates) {
  const Lts l(2, 0, {vis("a")}, {{0, 0, 1}});
  const Lts c = cutLabels(l, {"a"});
  EXPECT_EQ(c.numStates(), 1u);
  EXPECT_EQ(c.numTransitions(), 0u);
  EXPECT_EQ(cutLabels(chain(), {}), chain());
  const Lts d = cutLabels(chain(), {"b"});
  EXPECT_EQ(d.numStates(), 2u);
  EXPECT_EQ(d.numTransitions(), 1u);
}

TEST(Cut, KeepsInitialState) {
  const Lts l(3, 2, {vis("a"), vis("b")}, {{2, 0, 0}, {0, 1, 1}, {2, 1, 1}});
  const Lts c = cutLabels(l, {"a"});
  EXPECT_EQ(c.numStates(), 2u);
  EXPECT_EQ(c.numTransitions(), 1u);
  EXPECT_EQ(c.label(c.labelAt(c.outBegin(c.initial()))), vis("b"));
}

TEST(HideCutLaws, RandomSystems) {
  std::mt19937_64 rng(11);
  testing::RandomLtsShape shape;
  shape.maxStates = 8;
  shape.maxTransitions = 16;
  for (int i = 0; i < 100; ++i) {
    const Lts l = testing::randomLts(rng, shape);
    const GateSet g1{"a"}, g2{"b"}, g12{"a", "b"};
    EXPECT_EQ(hideLabels(hideLabels(l, g1), g1), hideLabels(l, g1));
    EXPECT_EQ(cutLabels(cutLabels(l, g1), g1), cutLabels(l, g1));
    EXPECT_EQ(hideLabels(l, {}), l);
    EXPECT_EQ(hideLabels(l, g12), hideLabels(hideLabels(l, g1), g2));
    EXPECT_EQ(hideLabels(l, g12), hideLabels(hideLabels(l, g2), g1));
    const Lts hidden = hideLabels(l, g12);
    EXPECT_EQ(hidden.numStates(), l.numStates());
    const Lts cut = cutLabels(l, g12);
    EXPECT_LE(cut.numStates(), l.numStates());
    EXPECT_LE(cut.numTransitions(), l.numTransitions());
    EXPECT_TRUE(cut.allReachable());
  }
}

TEST(Reachability, Gates) {
  EXPECT_EQ(reachableGates(chain(), 0), (GateSet{"a", "b"}));
  EXPECT_EQ(reachableGates(chain(), 1), (GateSet{"b"}));
  EXPECT_TRUE(reachableGates(chain(), 2).empty());
  EXPECT_THROW(reachableGates(chain(), 3), InvalidArgument);
}

TEST(Reachability, StatesReaching) {
  EXPECT_EQ(statesReaching(chain(), "b"), (std::vector<bool>{true, true, false}));
  EXPECT_EQ(statesReaching(chain(), "missing"), (std::vector<bool>{false, false, false}));
}

TEST(Reachability, EnteredAndEnabled) {
  EXPECT_EQ(statesEnteredBy(chain(), "a"), (std::vector<StateId>{1}));
  const Lts l(2, 0, {vis("a"), vis("b")}, {{0, 0, 1}, {0, 1, 1}, {1, 0, 0}});
  EXPECT_EQ(statesEnablingAll(l, {"a", "b"}), (std::vector<StateId>{0}));
}

TEST(RoundSafety, AcceptsOneCommitPerRound) {
  // r c r c ...
  const Lts ok(2, 0, {vis("receive_block_proposal"), vis("commit_empty_block")}, {{0, 0, 1}, {1, 1, 0}});
  EXPECT_TRUE(checkRoundSafety(ok).ok);
}

TEST(RoundSafety, RejectsMissingCommit) {
  const Lts bad(2, 0, {vis("receive_block_proposal"), vis("commit_empty_block")}, {{0, 0, 1}, {1, 0, 0}});
  const SafetyReport r = checkRoundSafety(bad);
  EXPECT_FALSE(r.ok);
  ASSERT_EQ(r.counterexample.size(), 2u);
  EXPECT_EQ(r.counterexample[1], vis("receive_block_proposal"));
}

TEST(RoundSafety, RejectsDoubleCommit) {
  const Lts bad(3, 0, {vis("receive_block_proposal"), vis("commit_empty_block"), vis("commit_proposed_block")},
                {{0, 0, 1}, {1, 1, 2}, {2, 2, 0}});
  EXPECT_FALSE(checkRoundSafety(bad).ok);
}

TEST(RoundSafety, RejectsCommitBeforeFirstRound) {
  const Lts bad(2, 0, {vis("commit_empty_block"), vis("receive_block_proposal")}, {{0, 0, 1}, {1, 1, 1}});
  EXPECT_FALSE(checkRoundSafety(bad).ok);
}

}  // namespace
}  // namespace bbacheck::lts
