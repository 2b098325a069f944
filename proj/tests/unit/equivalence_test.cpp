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

#include "bbacheck/equivalence.hpp"
#include "random_lts.hpp"

namespace bbacheck::equivalence {
namespace {

constexpr EquivalenceKind kAll[] = {EquivalenceKind::Strong, EquivalenceKind::Weak, EquivalenceKind::Branching};

ActionLabel vis(const char* g) { return ActionLabel::visible(g); }

// Builds an LTS over labels {tau, a, b, c} indexed 0..3.
Lts make(std::size_t n, std::vector<lts::LtsTransition> t) {
  return Lts(n, 0, {ActionLabel::tau(), vis("a"), vis("b"), vis("c")}, std::move(t));
}
constexpr lts::LabelIndex T = 0, A = 1, B = 2, C = 3;

struct Expect {
  bool strong, weak, branching;
};

void check(const Lts& x, const Lts& y, Expect e) {
  const bool want[] = {e.strong, e.weak, e.branching};
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(compare(x, y, kAll[k]).equivalent, want[k]) << kindName(kAll[k]);
    EXPECT_EQ(bruteForceBisim(x, y, kAll[k]), want[k]) << kindName(kAll[k]);
  }
}

TEST(Kinds, NamesRoundTrip) {
  for (auto k : kAll) EXPECT_EQ(parseKind(kindName(k)), k);
  EXPECT_EQ(parseKind("WEAK"), EquivalenceKind::Weak);
  EXPECT_EQ(parseKind("Branching"), EquivalenceKind::Branching);
  EXPECT_THROW(parseKind("trace"), InvalidArgument);
}

TEST(Partition, FromBlockIdsNormalizes) {
  const Partition p = Partition::fromBlockIds({5, 3, 5, 7});
  EXPECT_EQ(p.blockOf, (std::vector<std::uint32_t>{0, 1, 0, 2}));
  ASSERT_EQ(p.numBlocks(), 3u);
  EXPECT_EQ(p.blocks[0], (std::vector<StateId>{0, 2}));
}

TEST(Compare, InternalStepAfterVisible) {
  // a.tau.b versus a.b
  check(make(4, {{0, A, 1}, {1, T, 2}, {2, B, 3}}), make(3, {{0, A, 1}, {1, B, 2}}), {false, true, true});
}

TEST(Compare, InitialInternalStep) {
  // tau.a versus a
  check(make(3, {{0, T, 1}, {1, A, 2}}), make(2, {{0, A, 1}}), {false, true, true});
}

TEST(Compare, InternalChoiceIsObservable) {
  // a + tau.b versus a + b
  check(make(4, {{0, A, 1}, {0, T, 2}, {2, B, 3}}), make(3, {{0, A, 1}, {0, B, 2}}), {false, false, false});
}

TEST(Compare, BranchingIsFinerThanWeak) {
  // a.(b + tau.c) + a.c versus a.(b + tau.c)
  const Lts x = make(6, {{0, A, 1}, {1, B, 2}, {1, T, 3}, {3, C, 4}, {0, A, 5}, {5, C, 4}});
  const Lts y = make(5, {{0, A, 1}, {1, B, 2}, {1, T, 3}, {3, C, 4}});
  check(x, y, {false, true, false});
}

TEST(Compare, DivergenceIsInvisible) {
  // tau loop versus the inactive process
  check(make(1, {{0, T, 0}}), make(1, {}), {false, true, true});
  check(make(2, {{0, T, 1}, {1, T, 0}, {1, A, 1}}), make(1, {{0, A, 0}}), {false, true, true});
}

TEST(Compare, IdenticalSystems) {
  const Lts x = make(3, {{0, A, 1}, {1, B, 0}, {1, T, 2}});
  check(x, x, {true, true, true});
}

TEST(Compare, WitnessForInequivalentSystems) {
  const Lts x = make(3, {{0, A, 1}, {1, B, 2}});
  const Lts y = make(3, {{0, A, 1}, {1, C, 2}});
  for (auto k : kAll) {
    const Verdict v = compare(x, y, k);
    ASSERT_FALSE(v.equivalent);
    ASSERT_TRUE(v.witness.has_value());
    ASSERT_FALSE(v.witness->empty());
    EXPECT_EQ((*v.witness)[0], vis("a"));
    for (const auto& l : *v.witness) {
      if (k != EquivalenceKind::Strong) {
        EXPECT_FALSE(l.isSilent());
      }
    }
  }
  EXPECT_FALSE(compare(x, x, EquivalenceKind::Strong).witness.has_value());
}

TEST(Partition, StrongBlocks) {
  // 0 -a-> 1, 2 -a-> 3: states 0 and 2 agree, as do 1 and 3.
  const Partition p = coarsestPartition(make(4, {{0, A, 1}, {2, A, 3}}), EquivalenceKind::Strong);
  EXPECT_EQ(p.numBlocks(), 2u);
  EXPECT_EQ(p.blockOf[0], p.blockOf[2]);
  EXPECT_EQ(p.blockOf[1], p.blockOf[3]);
  EXPECT_NE(p.blockOf[0], p.blockOf[1]);
}

TEST(Minimize, CollapsesAndDropsInertSteps) {
  const Lts x = make(4, {{0, A, 1}, {1, T, 2}, {2, B, 3}});
  EXPECT_EQ(minimize(x, EquivalenceKind::Strong).numStates(), 4u);
  const Lts b = minimize(x, EquivalenceKind::Branching);
  EXPECT_EQ(b.numStates(), 3u);
  EXPECT_EQ(b.numTransitions(), 2u);
  EXPECT_EQ(minimize(x, EquivalenceKind::Weak).numStates(), 3u);
  // Unreachable states are discarded.
  EXPECT_EQ(minimize(make(3, {{1, A, 2}}), EquivalenceKind::Strong).numStates(), 1u);
}

TEST(BruteForce, RejectsLargeInputs) {
  const Lts big(40, 0, {vis("a")}, {});
  EXPECT_THROW(bruteForceBisim(big, big, EquivalenceKind::Strong), InvalidArgument);
}

TEST(Random, AgreesWithOracle) {
  std::mt19937_64 rng(20261014);
  for (int i = 0; i < 300; ++i) {
    const Lts x = testing::randomLts(rng), y = testing::randomLts(rng);
    for (auto k : kAll) {
      ASSERT_EQ(compare(x, y, k).equivalent, bruteForceBisim(x, y, k)) << "pair " << i << " " << kindName(k);
    }
    const bool s = compare(x, y, EquivalenceKind::Strong).equivalent;
    const bool b = compare(x, y, EquivalenceKind::Branching).equivalent;
    const bool w = compare(x, y, EquivalenceKind::Weak).equivalent;
    EXPECT_TRUE(!s || b);
    EXPECT_TRUE(!b || w);
  }
}

TEST(Random, MinimizeIsEquivalentAndIdempotent) {
  std::mt19937_64 rng(7);
  testing::RandomLtsShape shape;
  shape.maxStates = 12;
  shape.maxTransitions = 30;
  for (int i = 0; i < 200; ++i) {
    const Lts x = testing::randomLts(rng, shape);
    for (auto k : kAll) {
      const Lts m = minimize(x, k);
      EXPECT_TRUE(compare(x, m, k).equivalent) << kindName(k);
      EXPECT_EQ(minimize(m, k), m) << kindName(k);
      EXPECT_TRUE(m.allReachable());
    }
  }
}

TEST(Random, CompareIsSymmetric) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    const Lts x = testing::randomLts(rng), y = testing::randomLts(rng);
    for (auto k : kAll) EXPECT_EQ(compare(x, y, k).equivalent, compare(y, x, k).equivalent);
  }
}

}  // namespace
}  // namespace bbacheck::equivalence
