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

#include <benchmark/benchmark.h>

#include <cstdint>

#include "bbacheck/equivalence.hpp"
#include "bbacheck/lts.hpp"
#include "bbacheck/model.hpp"
#include "bbacheck/montecarlo.hpp"
#include "bbacheck/noninterference.hpp"

namespace {

using namespace bbacheck;

model::ModelParams params(model::Nat honest, model::Nat malicious) {
  model::ModelParams p;
  p.nHonest = honest;
  p.nMalicious = malicious;
  p.committeeSize = 2;
  p.voteThreshold = 1;
  p.pIn = Rational(3, 4);
  return p;
}

lts::Lts explored(model::Nat honest, model::Nat malicious) {
  model::Model m(params(honest, malicious));
  return lts::explore(m.env(), m.network());
}

void BM_Explore(benchmark::State& state) {
  const auto honest = static_cast<model::Nat>(state.range(0));
  const auto malicious = static_cast<model::Nat>(state.range(1));
  std::size_t states = 0;
  for (auto _ : state) {
    model::Model m(params(honest, malicious));
    states = lts::explore(m.env(), m.network()).numStates();
    benchmark::DoNotOptimize(states);
  }
  state.counters["states"] = static_cast<double>(states);
}
BENCHMARK(BM_Explore)->Args({2, 0})->Args({1, 1})->Args({3, 0})->Unit(benchmark::kMillisecond);

template <equivalence::EquivalenceKind kind>
void BM_Minimize(benchmark::State& state) {
  const lts::Lts l = explored(static_cast<model::Nat>(state.range(0)), static_cast<model::Nat>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(equivalence::minimize(l, kind).numStates());
  state.counters["states"] = static_cast<double>(l.numStates());
}
BENCHMARK(BM_Minimize<equivalence::EquivalenceKind::Strong>)->Args({3, 0})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Minimize<equivalence::EquivalenceKind::Branching>)->Args({3, 0})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Minimize<equivalence::EquivalenceKind::Weak>)->Args({3, 0})->Unit(benchmark::kMillisecond);

void BM_Bsnni(benchmark::State& state) {
  const lts::Lts l = explored(static_cast<model::Nat>(state.range(0)), static_cast<model::Nat>(state.range(1)));
  const std::vector kinds{equivalence::EquivalenceKind::Weak, equivalence::EquivalenceKind::Branching};
  for (auto _ : state) {
    benchmark::DoNotOptimize(noninterference::bsnni(l, {"boycott"}, kinds).size());
  }
}
BENCHMARK(BM_Bsnni)->Args({1, 1})->Args({0, 2})->Unit(benchmark::kMillisecond);

void BM_SimulateRound(benchmark::State& state) {
  montecarlo::Simulator sim(params(2, 2));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(sim.runRound(montecarlo::Adversary::probabilistic(0.5), seed++).stepsTaken);
    } catch (const montecarlo::Deadlock&) {
    }
  }
}
BENCHMARK(BM_SimulateRound);

}  // namespace

BENCHMARK_MAIN();
