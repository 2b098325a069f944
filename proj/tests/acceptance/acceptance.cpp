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


// Acceptance driver: one PASS/FAIL line per criterion, detail lines start
// with '#'. Optional arguments select criteria by number.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bbacheck/aut.hpp"
#include "bbacheck/equivalence.hpp"
#include "bbacheck/lts.hpp"
#include "bbacheck/model.hpp"
#include "bbacheck/montecarlo.hpp"
#include "bbacheck/noninterference.hpp"
#include "markov_oracle.hpp"
#include "random_lts.hpp"

namespace {

using namespace bbacheck;
using equivalence::EquivalenceKind;
using Clock = std::chrono::steady_clock;
namespace g = calculus::gates;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fixed(double x, int digits = 1) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << x;
  return os.str();
}

void note(const std::string& s) { std::cout << "# " << s << std::endl; }

class Report {
 public:
  void record(int id, bool ok, const std::string& detail) {
    auto& r = results_[id];
    r.ran = true;
    r.ok = r.ok && ok;
    if (!detail.empty()) r.details.push_back(detail);
    note("criterion " + std::to_string(id) + (ok ? " ok: " : " failed: ") + detail);
  }
  void title(int id, std::string t) { results_[id].title = std::move(t); }

  int finish() const {
    bool all = true;
    for (const auto& [id, r] : results_) {
      if (!r.ran) continue;
      std::cout << (r.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << r.title << std::endl;
      all = all && r.ok;
    }
    return all ? 0 : 1;
  }

 private:
  struct Result {
    std::string title;
    bool ran = false, ok = true;
    std::vector<std::string> details;
  };
  std::map<int, Result> results_;
};

model::ModelParams population(model::Nat honest, model::Nat malicious) {
  model::ModelParams p;
  p.nHonest = honest;
  p.nMalicious = malicious;
  return p;
}

model::ModelParams twoHonest() {
  model::ModelParams p;
  p.nHonest = 2;
  p.nMalicious = 0;
  p.committeeSize = 2;
  p.voteThreshold = 1;
  p.pIn = Rational(3, 4);
  return p;
}

bool roundTrips(const lts::Lts& l, const std::filesystem::path& file) {
  aut::writeAutFile(l, file.string());
  const bool same = aut::readAutFile(file.string()) == l;
  std::filesystem::remove(file);
  return same;
}

void parameterFormulas(Report& rep) {
  const Rational ph = model::pH(Rational::parse("0.8"));
  const Rational pv = model::pV(3, 4);
  const bool ok = ph == Rational::parse("0.7424") && pv == Rational::parse("0.75") && ph.toString() == "0.7424" &&
                  pv.toString() == "0.75";
  rep.record(4, ok, "pH(0.8) = " + ph.toString() + ", pV(3,4) = " + pv.toString());
}

void oracleAgreement(Report& rep) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20261014);
  constexpr EquivalenceKind kinds[] = {EquivalenceKind::Strong, EquivalenceKind::Branching, EquivalenceKind::Weak};
  std::size_t disagreements = 0, chainBreaks = 0, equivalent[3] = {0, 0, 0};
  constexpr int kPairs = 1000;
  for (int i = 0; i < kPairs; ++i) {
    const lts::Lts a = testing::randomLts(rng), b = testing::randomLts(rng);
    bool v[3];
    for (int k = 0; k < 3; ++k) {
      v[k] = equivalence::compare(a, b, kinds[k]).equivalent;
      if (v[k] != equivalence::bruteForceBisim(a, b, kinds[k])) ++disagreements;
      equivalent[k] += v[k];
    }
    if ((v[0] && !v[1]) || (v[1] && !v[2])) ++chainBreaks;
  }
  const double secs = since(t0);
  rep.record(5, disagreements == 0 && chainBreaks == 0 && secs <= 60.0,
             std::to_string(kPairs) + " pairs, " + std::to_string(disagreements) + " disagreements, " +
                 std::to_string(chainBreaks) + " implication breaks, equivalent strong/branching/weak " +
                 std::to_string(equivalent[0]) + "/" + std::to_string(equivalent[1]) + "/" +
                 std::to_string(equivalent[2]) + ", " + fixed(secs, 2) + " s");
}

void operatorLaws(Report& rep) {
  std::mt19937_64 rng(100);
  const std::vector<lts::GateSet> sets{{"a"}, {"a", "b"}, {"c"}, {"a", "b", "c"}};
  std::size_t broken = 0;
  for (int i = 0; i < 100; ++i) {
    const lts::Lts l = testing::randomLts(rng);
    if (!(lts::hideLabels(l, {}) == l) || !(lts::cutLabels(l, {}) == l)) ++broken;
    for (const auto& gs : sets) {
      const lts::Lts h = lts::hideLabels(l, gs), c = lts::cutLabels(l, gs);
      if (!(lts::hideLabels(h, gs) == h) || !(lts::cutLabels(c, gs) == c)) ++broken;
    }
  }
  rep.record(6, broken == 0, "hide/cut laws on 100 random systems: " + std::to_string(broken) + " violations");
}

void monteCarlo(Report& rep) {
  const auto t0 = Clock::now();
  const auto p = twoHonest();
  const auto exact = testing::roundProbabilities(p);
  const auto s = montecarlo::estimate(p, montecarlo::Adversary::never(), 10000, 1);
  const double target = exact.proposedGivenCommit();
  const bool close = s.completed > 0 && std::abs(s.fracProposed - target) <= 0.03;
  rep.record(7, close,
             "n=2 m=0 (c=2, V=1, pIn=0.75): estimate " + fixed(s.fracProposed, 4) + " over " +
                 std::to_string(s.completed) + " committed rounds (" + std::to_string(s.deadlocked) +
                 " deadlocked, " + std::to_string(s.capExceeded) + " over the step cap), exact " +
                 fixed(target, 4) + " given a commit, exact deadlock mass " + fixed(exact.deadlock, 4) + ", " +
                 fixed(since(t0), 1) + " s");
  const auto t1 = Clock::now();
  const auto b = montecarlo::estimate(population(2, 2), montecarlo::Adversary::always(), 1000, 1);
  rep.record(7, b.completed > 0 && b.fracEmpty == 1.0 && b.boycotted == b.completed,
             "n=2 m=2 always-boycott: fracEmpty " + fixed(b.fracEmpty, 4) + " over " +
                 std::to_string(b.completed) + " committed rounds (" + std::to_string(b.deadlocked) +
                 " deadlocked), " + fixed(since(t1), 1) + " s");
}

void configuration(Report& rep, model::Nat honest, model::Nat malicious, const std::set<int>& want,
                   const std::filesystem::path& dir) {
  const std::string name = "n=" + std::to_string(honest) + " m=" + std::to_string(malicious);
  const auto t0 = Clock::now();
  model::Model m(population(honest, malicious));
  lts::Lts l = lts::explore(m.env(), m.network());
  const double exploreSecs = since(t0);
  note(name + ": " + std::to_string(l.numStates()) + " states, " + std::to_string(l.numTransitions()) +
       " transitions, explored in " + fixed(exploreSecs) + " s");

  if (want.count(3)) {
    const auto s = lts::checkRoundSafety(l);
    const bool exclusive = lts::statesEnablingAll(l, {std::string(g::kCommitProposedBlock),
                                                      std::string(g::kCommitEmptyBlock)})
                               .empty();
    rep.record(3, s.ok && exclusive,
               name + ": observer error state " + (s.ok ? "unreachable" : "reachable") +
                   (exclusive ? ", no state enables both commits" : ", some state enables both commits"));
  }

  if (want.count(2) && malicious == 2) {
    const auto from = lts::statesEnteredBy(l, g::kBoycott);
    const auto proposed = lts::statesReaching(l, g::kCommitProposedBlock, g::kReceiveBlockProposal);
    const auto empty = lts::statesReaching(l, g::kCommitEmptyBlock, g::kReceiveBlockProposal);
    std::size_t reachP = 0, reachE = 0;
    for (auto s : from) {
      reachP += proposed[s];
      reachE += empty[s];
    }
    rep.record(2, !from.empty() && reachP == 0 && reachE == from.size(),
               name + ": " + std::to_string(from.size()) + " states entered by boycott; within the round " +
                   std::to_string(reachP) + " reach commit_proposed_block and " + std::to_string(reachE) +
                   " reach commit_empty_block");
    const auto later = lts::statesReaching(l, g::kCommitProposedBlock);
    std::size_t reachLater = 0;
    for (auto s : from) reachLater += later[s];
    note(name + ": across later rounds " + std::to_string(reachLater) + " of them reach commit_proposed_block");
  }

  if (want.count(6)) {
    const auto t1 = Clock::now();
    const bool same = roundTrips(l, dir / "model.aut");
    rep.record(6, same, name + ": .aut round trip " + (same ? "identical" : "differs") + ", " +
                            fixed(since(t1)) + " s");
  }

  if (want.count(1)) {
    const auto t1 = Clock::now();
    const auto verdicts = noninterference::bsnni(std::move(l), {std::string(g::kBoycott)},
                                                 {EquivalenceKind::Weak, EquivalenceKind::Branching});
    const double secs = exploreSecs + since(t1);
    const bool expectPass = malicious < 2;
    bool ok = true;
    std::string lines;
    for (const auto& v : verdicts) {
      ok = ok && v.pass == expectPass;
      lines += noninterference::verdictLine(v) + " (hide " + std::to_string(v.hideCompared.states) + " vs cut " +
               std::to_string(v.cutCompared.states) + " states after minimization); ";
    }
    rep.record(1, ok,
               name + ": " + lines + "expected " + (expectPass ? "PASS" : "FAIL") + ", " + fixed(secs) +
                   " s including exploration" + (secs <= 600.0 ? "" : " (over the 10 minute target)"));
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> want;
  for (int i = 1; i < argc; ++i) want.insert(std::stoi(argv[i]));
  if (want.empty()) want = {1, 2, 3, 4, 5, 6, 7};

  Report rep;
  rep.title(1, "BSNNI verdicts for n=2 m=2 (FAIL), n=3 m=1 (PASS), n=4 m=0 (PASS)");
  rep.title(2, "after boycott, commit_empty_block is forced and commit_proposed_block unreachable (m=2)");
  rep.title(3, "round safety observer on every configuration");
  rep.title(4, "exact parameter formulas pH(0.8) and pV(3,4)");
  rep.title(5, "equivalence engine agrees with the brute-force oracle on 1000 random pairs");
  rep.title(6, ".aut round trip on explored models and hide/cut laws");
  rep.title(7, "Monte Carlo estimate against the exact chain; always-boycott commits empty");

  const auto dir = std::filesystem::temp_directory_path() / ("bbacheck_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  try {
    if (want.count(4)) parameterFormulas(rep);
    if (want.count(5)) oracleAgreement(rep);
    if (want.count(6)) {
      operatorLaws(rep);
      model::Model small(twoHonest());
      rep.record(6, roundTrips(lts::explore(small.env(), small.network()), dir / "small.aut"),
                 "n=2 m=0 (c=2, V=1) .aut round trip");
    }
    if (want.count(7)) monteCarlo(rep);
    if (want.count(1) || want.count(2) || want.count(3) || want.count(6)) {
      for (auto [h, m] : {std::pair<model::Nat, model::Nat>{2, 2}, {3, 1}, {4, 0}}) {
        configuration(rep, h, m, want, dir);
      }
    }
  } catch (const std::exception& e) {
    std::cout << "# aborted: " << e.what() << std::endl;
    std::filesystem::remove_all(dir);
    rep.finish();
    return 2;
  }
  std::filesystem::remove_all(dir);
  return rep.finish();
}
