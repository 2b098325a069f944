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

#include "bbacheck/montecarlo.hpp"

#include <charconv>
#include <random>
#include <vector>

#include "json.hpp"

namespace bbacheck::montecarlo {

using calculus::Branch;
using calculus::Term;

Adversary Adversary::probabilistic(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("boycott probability must lie in [0, 1]");
  return {Kind::Probabilistic, q};
}

std::string Adversary::name() const {
  switch (kind) {
    case Kind::Never:
      return "never-boycott";
    case Kind::Always:
      return "always-boycott";
    case Kind::Probabilistic:
      return "probabilistic:" + nlohmann::json(q).dump();
  }
  return "never-boycott";
}

Adversary Adversary::parse(std::string_view text) {
  if (text == "never-boycott" || text == "never") return never();
  if (text == "always-boycott" || text == "always") return always();
  constexpr std::string_view prefix = "probabilistic:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string_view rest = text.substr(prefix.size());
    double q = 0.0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), q);
    if (ec == std::errc() && ptr == rest.data() + rest.size()) return probabilistic(q);
  }
  throw InvalidArgument("unknown adversary '" + std::string(text) +
                        "' (expected never-boycott, always-boycott or probabilistic:<q>)");
}

std::string_view commitName(Commit c) { return c == Commit::Proposed ? "proposed" : "empty"; }

StepCapExceeded::StepCapExceeded(std::uint32_t cap)
    : Error("no commit within " + std::to_string(cap) + " sync steps") {}

Deadlock::Deadlock() : Error("the round deadlocked before a commit") {}

std::uint64_t trialSeed(std::uint64_t master, std::uint64_t trial) {
  std::uint64_t z = master + (trial + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Simulator::Simulator(const model::ModelParams& params) : model_(params), initial_(model_.network()) {}

RoundOutcome Simulator::runRound(const Adversary& adversary, std::uint64_t seed, std::uint32_t stepCap) {
  calculus::Environment& env = model_.env();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto gateIs = [&](calculus::LabelId l, std::string_view g) { return env.label(l).gate() == g; };

  RoundOutcome out;
  enum class Decision { Open, Boycott, Refrain } decision = Decision::Open;
  Term state = initial_;
  std::vector<std::uint32_t> groupStart, eligible;
  for (;;) {
    const std::vector<Branch> branches = calculus::moves(env, state);
    if (branches.empty()) throw Deadlock();
    groupStart.clear();
    bool boycottEnabled = false;
    for (std::size_t i = 0; i < branches.size(); ++i) {
      if (i == 0 || branches[i].group != branches[i - 1].group) groupStart.push_back(static_cast<std::uint32_t>(i));
      boycottEnabled |= gateIs(branches[i].label, calculus::gates::kBoycott);
    }
    groupStart.push_back(static_cast<std::uint32_t>(branches.size()));

    if (boycottEnabled && decision == Decision::Open) {
      bool boycott = adversary.kind == Adversary::Kind::Always;
      if (adversary.kind == Adversary::Kind::Probabilistic) boycott = unit(rng) < adversary.q;
      decision = boycott ? Decision::Boycott : Decision::Refrain;
    }
    eligible.clear();
    for (std::uint32_t g = 0; g + 1 < groupStart.size(); ++g) {
      const bool isBoycott = gateIs(branches[groupStart[g]].label, calculus::gates::kBoycott);
      if (boycottEnabled && decision == Decision::Boycott && !isBoycott) continue;
      if (decision == Decision::Refrain && isBoycott) continue;
      eligible.push_back(g);
    }
    if (eligible.empty()) throw Deadlock();

    const std::uint32_t g = eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(rng)];
    std::uint32_t pick = groupStart[g];
    if (groupStart[g + 1] - groupStart[g] > 1) {
      double u = unit(rng);
      for (pick = groupStart[g]; pick + 1 < groupStart[g + 1]; ++pick) {
        u -= branches[pick].weight.toDouble();
        if (u < 0.0) break;
      }
    }
    const Branch& br = branches[pick];
    if (gateIs(br.label, calculus::gates::kBoycott)) out.boycotted = true;
    if (gateIs(br.label, calculus::gates::kCommitProposedBlock) || gateIs(br.label, calculus::gates::kCommitEmptyBlock)) {
      out.committed = gateIs(br.label, calculus::gates::kCommitProposedBlock) ? Commit::Proposed : Commit::Empty;
      return out;
    }
    if (gateIs(br.label, calculus::gates::kSync) && ++out.stepsTaken > stepCap) throw StepCapExceeded(stepCap);
    state = br.target;
  }
}

RoundOutcome runRound(const model::ModelParams& params, const Adversary& adversary, std::uint64_t seed,
                      std::uint32_t stepCap) {
  return Simulator(params).runRound(adversary, seed, stepCap);
}

SimStats estimate(const model::ModelParams& params, const Adversary& adversary, std::uint64_t trials,
                  std::uint64_t seed, std::uint32_t stepCap) {
  if (trials == 0) throw InvalidArgument("trials must be at least 1");
  Simulator sim(params);
  SimStats st;
  st.trials = trials;
  st.seed = seed;
  std::uint64_t steps = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    try {
      const RoundOutcome r = sim.runRound(adversary, trialSeed(seed, i), stepCap);
      ++st.completed;
      (r.committed == Commit::Proposed ? st.proposed : st.empty) += 1;
      st.boycotted += r.boycotted;
      steps += r.stepsTaken;
    } catch (const StepCapExceeded&) {
      ++st.capExceeded;
    } catch (const Deadlock&) {
      ++st.deadlocked;
    }
  }
  if (st.completed > 0) {
    const double c = static_cast<double>(st.completed);
    st.fracProposed = static_cast<double>(st.proposed) / c;
    st.fracEmpty = static_cast<double>(st.empty) / c;
    st.fracBoycotted = static_cast<double>(st.boycotted) / c;
    st.meanSteps = static_cast<double>(steps) / c;
  }
  return st;
}

std::string toJsonLine(const model::ModelParams& params, const Adversary& adversary, const SimStats& stats) {
  nlohmann::ordered_json j;
  j["nHonest"] = params.nHonest;
  j["nMalicious"] = params.nMalicious;
  j["committeeSize"] = params.committeeSize;
  j["voteThreshold"] = params.threshold();
  j["pIn"] = params.inProbability().toString();
  j["pZero"] = params.zeroProbability().toString();
  j["adversary"] = adversary.name();
  j["trials"] = stats.trials;
  j["completed"] = stats.completed;
  j["capExceeded"] = stats.capExceeded;
  j["deadlocked"] = stats.deadlocked;
  j["fracProposed"] = stats.fracProposed;
  j["fracEmpty"] = stats.fracEmpty;
  j["fracBoycotted"] = stats.fracBoycotted;
  j["meanSteps"] = stats.meanSteps;
  j["seed"] = stats.seed;
  return j.dump();
}

}  // namespace bbacheck::montecarlo
