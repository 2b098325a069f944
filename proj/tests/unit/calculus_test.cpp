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

#include "bbacheck/calculus.hpp"
#include "bbacheck/lts.hpp"

namespace bbacheck::calculus {
namespace {

ActionLabel vis(const char* g) { return ActionLabel::visible(g); }

class CalculusTest : public ::testing::Test {
 protected:
  Environment env;
  std::vector<std::pair<ActionLabel, Term>> succ(Term t) {
    std::vector<std::pair<ActionLabel, Term>> out;
    for (const Transition& tr : successors(env, t)) out.emplace_back(env.label(tr.label), tr.target);
    return out;
  }
};

TEST_F(CalculusTest, PrefixRule) {
  const Term t = env.prefix(vis("a"), env.nil());
  const auto s = succ(t);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].first, vis("a"));
  EXPECT_EQ(s[0].second, env.nil());
  EXPECT_TRUE(succ(env.nil()).empty());
}

TEST_F(CalculusTest, ProbabilisticChoiceBecomesProbLabels) {
  const Term p = env.prefix(vis("a"), env.nil());
  const Term q = env.prefix(vis("b"), env.nil());
  const auto s = succ(env.probChoice(Rational::parse("0.7424"), p, q));
  ASSERT_EQ(s.size(), 2u);
  std::set<std::pair<std::string, std::uint32_t>> got;
  for (auto& [l, t] : s) got.emplace(l.toString(), t.id);
  EXPECT_TRUE(got.count({ActionLabel::prob(Rational::parse("0.7424")).toString(), p.id}));
  EXPECT_TRUE(got.count({ActionLabel::prob(Rational::parse("0.2576")).toString(), q.id}));
}

TEST_F(CalculusTest, ProbabilityOutsideRangeIsRejected) {
  EXPECT_THROW(env.probChoice(Rational(0), env.nil(), env.nil()), InvalidProbability);
  EXPECT_THROW(env.probChoice(Rational(3, 2), env.nil(), env.nil()), InvalidProbability);
}

TEST_F(CalculusTest, ProbabilisticGroupWeightsSumToOne) {
  const Term t = env.choice(env.probChoice(Rational(1, 3), env.nil(), env.prefix(vis("a"), env.nil())),
                            env.prefix(vis("b"), env.nil()));
  const auto ms = moves(env, t);
  std::map<std::uint32_t, Rational> sum;
  for (const Branch& b : ms) sum[b.group] = sum.count(b.group) ? sum[b.group] + b.weight : b.weight;
  ASSERT_EQ(sum.size(), 2u);
  for (auto& [g, w] : sum) EXPECT_EQ(w, Rational(1)) << g;
}

TEST(Moves, OrderIgnoresInterningHistory) {
  auto build = [](calculus::Environment& e) {
    return e.choice(e.prefix(ActionLabel::visible("b"), e.nil()),
                    e.probChoice(Rational(1, 4), e.prefix(ActionLabel::visible("a"), e.nil()), e.nil()));
  };
  calculus::Environment fresh, used;
  used.prefix(ActionLabel::visible("a"), used.prefix(ActionLabel::visible("b"), used.nil()));
  const auto x = moves(fresh, build(fresh));
  const auto y = moves(used, build(used));
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(fresh.label(x[i].label), used.label(y[i].label));
    EXPECT_EQ(x[i].group, y[i].group);
    EXPECT_EQ(x[i].weight, y[i].weight);
  }
}

TEST_F(CalculusTest, HideRewritesToSilent) {
  const Term t = env.hide({"boycott"}, env.prefix(vis("boycott"), env.nil()));
  const auto s = succ(t);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_TRUE(s[0].first.isSilent());
}

TEST_F(CalculusTest, RestrictDropsMatchingGates) {
  const Term t = env.restrict({"a"}, env.choice(env.prefix(vis("a"), env.nil()), env.prefix(vis("b"), env.nil())));
  const auto s = succ(t);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].first, vis("b"));
}

TEST_F(CalculusTest, ParallelSynchronizesOnSyncSet) {
  const Term a = env.prefix(vis("sync"), env.nil());
  const Term t = env.parallel({"sync"}, a, a);
  const auto s = succ(t);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].first, vis("sync"));
  EXPECT_EQ(s[0].second, env.parallel({"sync"}, env.nil(), env.nil()));
}

TEST_F(CalculusTest, ParallelInterleavesOtherwise) {
  const Term t = env.parallel({}, env.prefix(vis("a"), env.nil()), env.prefix(vis("b"), env.nil()));
  EXPECT_EQ(succ(t).size(), 2u);
  const Term u = env.parallel({"a"}, env.prefix(vis("a"), env.nil()), env.prefix(vis("b"), env.nil()));
  const auto s = succ(u);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].first, vis("b"));
}

TEST_F(CalculusTest, ParallelNeverSynchronizesSilentSteps) {
  const Term t = env.prefix(ActionLabel::tau(), env.nil());
  const auto s = succ(env.parallel({"a"}, t, t));
  ASSERT_EQ(s.size(), 2u);
  for (const auto& [l, target] : s) {
    EXPECT_TRUE(l.isSilent());
    EXPECT_NE(target, env.parallel({"a"}, env.nil(), env.nil()));
  }
  const Term u = env.parallel({"a"}, t, env.prefix(ActionLabel::tau(), env.prefix(vis("b"), env.nil())));
  EXPECT_EQ(succ(u).size(), 2u);
}

TEST_F(CalculusTest, SyncMatchesDataExactly) {
  const Term l = env.prefix(ActionLabel::visible("ask", {Nat{0}}), env.nil());
  const Term r = env.prefix(ActionLabel::visible("ask", {Nat{1}}), env.nil());
  EXPECT_TRUE(succ(env.parallel({"ask"}, l, r)).empty());
  EXPECT_EQ(succ(env.parallel({"ask"}, l, l)).size(), 1u);
}

TEST_F(CalculusTest, CallsUnfoldWithArguments) {
  env.define("Count", 1, [](Environment& e, std::span<const Value> args) {
    const Nat k = std::get<Nat>(args[0]);
    if (k == 0) return e.nil();
    return e.prefix(ActionLabel::visible("tick", {k}), e.call("Count", {Nat{k - 1}}));
  });
  const lts::Lts l = lts::explore(env, env.call("Count", {Nat{3}}));
  EXPECT_EQ(l.numStates(), 4u);
  EXPECT_EQ(l.numTransitions(), 3u);
}

TEST_F(CalculusTest, UnresolvedCallIsAnError) {
  EXPECT_THROW(env.call("Missing", {}), UnresolvedCall);
  env.define("P", 0, [](Environment& e, std::span<const Value>) { return e.nil(); });
  EXPECT_THROW(env.call("P", {Nat{1}}), UnresolvedCall);
}

TEST_F(CalculusTest, UnguardedRecursionIsDetected) {
  env.define("Loop", 0, [](Environment& e, std::span<const Value>) { return e.call("Loop", {}); });
  EXPECT_THROW(successors(env, env.call("Loop", {})), UnguardedRecursion);
}

TEST_F(CalculusTest, SuccessorsAreDeterministic) {
  const Term t = env.parallel({}, env.choice(env.prefix(vis("a"), env.nil()), env.prefix(vis("b"), env.nil())),
                              env.prefix(vis("c"), env.nil()));
  EXPECT_EQ(successors(env, t), successors(env, t));
}

TEST_F(CalculusTest, Alphabet) {
  EXPECT_TRUE(alphabet(env, env.nil()).empty());
  const Term t = env.prefix(vis("a"), env.prefix(vis("b"), env.nil()));
  EXPECT_EQ(alphabet(env, t), (GateSet{"a", "b"}));
  EXPECT_EQ(alphabet(env, env.hide({"a"}, t)), (GateSet{"a", "b"}));
}

TEST_F(CalculusTest, LabelEqualityIsByValue) {
  EXPECT_EQ(ActionLabel::visible("propagate", {Nat{1}, Nat{0}}), ActionLabel::visible("propagate", {Nat{1}, Nat{0}}));
  EXPECT_NE(ActionLabel::visible("propagate", {Nat{1}, Nat{0}}), ActionLabel::visible("propagate", {Nat{1}, Nat{1}}));
  EXPECT_NE(ActionLabel::tau(), vis("a"));
}

TEST_F(CalculusTest, LabelSignaturesAreEnforced) {
  EXPECT_THROW(ActionLabel::visible("propagate", {Nat{1}}), InvalidLabel);
  EXPECT_THROW(ActionLabel::visible("reply"), InvalidLabel);
  EXPECT_THROW(ActionLabel::visible("ask", {Nat{2}}), InvalidLabel);
  EXPECT_THROW(ActionLabel::visible("i"), InvalidLabel);
  EXPECT_THROW(ActionLabel::visible("Bad Gate"), InvalidLabel);
}

}  // namespace
}  // namespace bbacheck::calculus
