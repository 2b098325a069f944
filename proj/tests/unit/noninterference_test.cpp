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

#include "bbacheck/model.hpp"
#include "bbacheck/noninterference.hpp"
#include "random_lts.hpp"

namespace bbacheck::noninterference {
namespace {

using equivalence::compare;
constexpr EquivalenceKind kWeak = EquivalenceKind::Weak, kBranching = EquivalenceKind::Branching;

Lts make(std::size_t n, std::vector<lts::LtsTransition> t) {
  return Lts(n, 0, {ActionLabel::visible("h"), ActionLabel::visible("a"), ActionLabel::visible("b")}, std::move(t));
}
constexpr lts::LabelIndex H = 0, A = 1, B = 2;
const GateSet kHigh{"h"};

TEST(Bsnni, HighChoiceThatRemovesAnOptionFails) {
  // h.a + b
  const Lts x = make(4, {{0, H, 1}, {1, A, 2}, {0, B, 3}});
  for (auto k : {kWeak, kBranching}) {
    const NiVerdict v = bsnni(x, kHigh, k);
    EXPECT_FALSE(v.pass);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_EQ(v.kind, k);
  }
}

TEST(Bsnni, RedundantHighActionPasses) {
  // a + h.a
  const Lts x = make(3, {{0, A, 1}, {0, H, 2}, {2, A, 1}});
  for (auto k : {kWeak, kBranching}) {
    const NiVerdict v = bsnni(x, kHigh, k);
    EXPECT_TRUE(v.pass);
    EXPECT_FALSE(v.witness.has_value());
  }
}

TEST(Bsnni, NoHighActionPasses) {
  const Lts x = make(3, {{0, A, 1}, {1, B, 2}});
  EXPECT_TRUE(bsnni(x, kHigh, kBranching).pass);
  EXPECT_TRUE(bsnni(x, {}, kWeak).pass);
}

TEST(Bsnni, RecordsOperandSizes) {
  const Lts x = make(4, {{0, H, 1}, {1, A, 2}, {0, B, 3}});
  const NiVerdict raw = bsnni(x, kHigh, kWeak, BsnniOptions{.minimizeOperands = false});
  EXPECT_EQ(raw.cut, (LtsSize{2, 1}));
  EXPECT_EQ(raw.hide, (LtsSize{4, 3}));
  EXPECT_EQ(raw.cutCompared, raw.cut);
  EXPECT_EQ(raw.hideCompared, raw.hide);
  const NiVerdict min = bsnni(x, kHigh, kWeak);
  EXPECT_EQ(min.cut, raw.cut);
  EXPECT_EQ(min.hide, raw.hide);
  EXPECT_LE(min.hideCompared.states, min.hide.states);
  EXPECT_EQ(sizeOf(x), (LtsSize{4, 3}));
}

TEST(Bsnni, SeveralKindsInOrder) {
  const Lts x = make(3, {{0, A, 1}, {0, H, 2}, {2, A, 1}});
  const auto v = bsnni(x, kHigh, {kBranching, kWeak, EquivalenceKind::Strong});
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0].kind, kBranching);
  EXPECT_EQ(v[1].kind, kWeak);
  EXPECT_EQ(v[2].kind, EquivalenceKind::Strong);
  EXPECT_TRUE(v[0].pass);
  EXPECT_TRUE(v[1].pass);
  EXPECT_FALSE(v[2].pass);
}

TEST(Bsnni, VerdictLines) {
  NiVerdict v;
  v.kind = kWeak;
  EXPECT_EQ(verdictLine(v), "WEAK_BSNNI: PASS");
  v.kind = kBranching;
  v.pass = false;
  EXPECT_EQ(verdictLine(v), "BRANCHING_BSNNI: FAIL");
}

TEST(Bsnni, MinimizationDoesNotChangeVerdicts) {
  std::mt19937_64 rng(4242);
  testing::RandomLtsShape shape;
  shape.maxStates = 10;
  shape.maxTransitions = 20;
  for (int i = 0; i < 200; ++i) {
    const Lts x = testing::randomLts(rng, shape);
    const GateSet high{"c"};
    const auto opt = bsnni(x, high, {kWeak, kBranching});
    const auto raw = bsnni(x, high, {kWeak, kBranching}, BsnniOptions{.minimizeOperands = false});
    const Lts cut = lts::cutLabels(x, high), hide = lts::hideLabels(x, high);
    for (std::size_t k = 0; k < 2; ++k) {
      EXPECT_EQ(opt[k].pass, raw[k].pass) << i;
      EXPECT_EQ(raw[k].pass, compare(cut, hide, opt[k].kind).equivalent) << i;
    }
    EXPECT_TRUE(!opt[1].pass || opt[0].pass);
  }
}

model::ModelParams small(model::Nat honest, model::Nat malicious) {
  model::ModelParams p;
  p.nHonest = honest;
  p.nMalicious = malicious;
  p.committeeSize = 2;
  p.voteThreshold = 1;
  p.pIn = Rational(3, 4);
  return p;
}

Lts explored(const model::ModelParams& p) {
  model::Model m(p);
  return lts::explore(m.env(), m.network());
}

TEST(BsnniModel, HonestNetworkPasses) {
  for (const auto& v : bsnni(explored(small(2, 0)), {"boycott"}, {kWeak, kBranching})) EXPECT_TRUE(v.pass);
}

TEST(BsnniModel, BoycottIsObservable) {
  for (const auto& v : bsnni(explored(small(1, 1)), {"boycott"}, {kWeak, kBranching})) {
    EXPECT_FALSE(v.pass) << verdictLine(v);
    EXPECT_TRUE(v.witness.has_value());
  }
}

}  // namespace
}  // namespace bbacheck::noninterference
