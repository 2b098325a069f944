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

#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bbacheck/aut.hpp"
#include "bbacheck/equivalence.hpp"
#include "bbacheck/lts.hpp"
#include "bbacheck/model.hpp"
#include "bbacheck/montecarlo.hpp"
#include "bbacheck/noninterference.hpp"
#include "bbacheck/trace.hpp"

namespace bbacheck::cli {

namespace {

using equivalence::EquivalenceKind;
using lts::GateSet;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct ModelFlags {
  std::optional<std::string> config;
  std::optional<unsigned> honest, malicious, committee, threshold;
  std::optional<std::string> pIn, h, pZero;
  std::optional<std::size_t> maxStates, maxTransitions;

  void attach(CLI::App& app, bool limits) {
    app.add_option("--config", config, std::string("Model config file (default: $") + kConfigEnv + ")");
    app.add_option("--honest", honest, "Number of honest nodes");
    app.add_option("--malicious", malicious, "Number of malicious nodes");
    app.add_option("--committee", committee, "Expected committee size c");
    app.add_option("--threshold", threshold, "Vote threshold V");
    app.add_option("--p-in", pIn, "Committee membership probability");
    app.add_option("--h", h, "Honest stake fraction h");
    app.add_option("--p-zero", pZero, "Probability of initial bit 0");
    if (limits) {
      app.add_option("--max-states", maxStates, "Exploration state limit");
      app.add_option("--max-transitions", maxTransitions, "Exploration transition limit");
    }
  }

  model::ModelParams params() const {
    model::ModelParams p;
    std::optional<std::string> path = config;
    if (!path) {
      if (const char* env = std::getenv(kConfigEnv); env && *env) path = env;
    }
    if (path) p = model::loadConfigFile(*path, p);
    if (honest) p.nHonest = *honest;
    if (malicious) p.nMalicious = *malicious;
    if (committee) p.committeeSize = *committee;
    if (threshold) p.voteThreshold = *threshold;
    if (pIn) p.pIn = Rational::parse(*pIn);
    if (h) p.hFraction = Rational::parse(*h);
    if (pZero) p.pZero = Rational::parse(*pZero);
    p.validate();
    return p;
  }

  lts::ExploreLimits limits() const {
    lts::ExploreLimits l;
    if (maxStates) l.maxStates = *maxStates;
    if (maxTransitions) l.maxTransitions = *maxTransitions;
    return l;
  }
};

lts::Lts exploreModel(const ModelFlags& flags, std::ostream& out) {
  const model::ModelParams p = flags.params();
  model::Model m(p);
  lts::Lts l = lts::explore(m.env(), m.network(), flags.limits());
  out << "# model: " << p.describe() << "\n";
  out << "states: " << l.numStates() << "\n";
  out << "transitions: " << l.numTransitions() << "\n";
  return l;
}

std::string formatTrace(const std::vector<lts::ActionLabel>& trace) {
  if (trace.empty()) return "(empty)";
  std::string s;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i) s += ", ";
    s += "\"" + aut::formatLabel(trace[i]) + "\"";
  }
  return s;
}

GateSet parseGates(const std::string& text) {
  GateSet out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string gate = lower(text.substr(start, comma - start));
    gate.erase(std::remove_if(gate.begin(), gate.end(), [](unsigned char c) { return std::isspace(c); }), gate.end());
    if (!gate.empty()) out.insert(gate);
    start = comma + 1;
  }
  return out;
}

bool hasGate(const lts::Lts& l, const std::string& gate) {
  return std::any_of(l.labels().begin(), l.labels().end(),
                     [&](const lts::ActionLabel& a) { return !a.isSilent() && a.gate() == gate; });
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explicit-state workbench for the BBA* agreement model", "bbacheck"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  ModelFlags exploreFlags, bsnniFlags, simFlags;
  std::optional<std::string> output;

  auto* explore = app.add_subcommand("explore", "Build and explore the model; optionally write .aut");
  exploreFlags.attach(*explore, true);
  explore->add_option("-o,--output", output, "Output .aut path");

  std::string file1, file2, kindText = "branching";
  auto* compare = app.add_subcommand("compare", "Compare two .aut files modulo an equivalence");
  compare->add_option("file1", file1, "First .aut file")->required();
  compare->add_option("file2", file2, "Second .aut file")->required();
  compare->add_option("--kind", kindText, "strong, weak or branching")->capture_default_str();

  std::vector<std::string> bsnniKinds;
  std::string high = "boycott";
  bool noMinimize = false, verbose = false;
  auto* bsnni = app.add_subcommand("bsnni", "Check BSNNI (weak and branching by default)");
  bsnniFlags.attach(*bsnni, true);
  bsnni->add_option("--kind", bsnniKinds, "Restrict to these kinds");
  bsnni->add_option("--high", high, "Comma-separated high gates")->capture_default_str();
  bsnni->add_flag("--no-minimize", noMinimize, "Compare operands without minimizing them");
  bsnni->add_flag("--verbose", verbose, "Trace progress on stderr");
  bsnni->add_option("-o,--output", output, "Directory for cut.aut and hide.aut");

  std::string queryFile, queryGate;
  std::optional<std::string> after;
  auto* query = app.add_subcommand("query", "Reachability of a gate in a .aut file");
  query->add_option("file", queryFile, ".aut file")->required();
  query->add_option("gate", queryGate, "Gate to reach")->required();
  query->add_option("--after", after, "Check from every state entered by this gate");
  std::string until(calculus::gates::kReceiveBlockProposal);
  bool unbounded = false;
  query->add_option("--until", until, "With --after, paths stop at this gate")->capture_default_str();
  query->add_flag("--unbounded", unbounded, "With --after, search paths of any length");

  std::uint64_t trials = 1000, seed = 1;
  std::string adversaryText = "never-boycott";
  std::uint32_t stepCap = montecarlo::kDefaultStepCap;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of round outcomes");
  simFlags.attach(*simulate, false);
  simulate->add_option("--trials", trials, "Number of rounds")->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()))->capture_default_str();
  simulate->add_option("--seed", seed, "Master seed")->capture_default_str();
  simulate->add_option("--adversary", adversaryText, "never-boycott, always-boycott or probabilistic:<q>")
      ->capture_default_str();
  simulate->add_option("--step-cap", stepCap, "Sync steps before a round is abandoned")->capture_default_str();
  simulate->add_option("-o,--output", output, "Append the record to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (*explore) {
      lts::Lts l = exploreModel(exploreFlags, out);
      if (output) {
        aut::writeAutFile(l, *output);
        out << "wrote " << *output << "\n";
      }
      return kExitOk;
    }

    if (*compare) {
      const EquivalenceKind kind = equivalence::parseKind(kindText);
      const lts::Lts a = aut::readAutFile(file1);
      const lts::Lts b = aut::readAutFile(file2);
      const auto v = equivalence::compare(a, b, kind);
      out << (v.equivalent ? "PASS" : "FAIL") << "\n";
      if (v.witness) out << "witness: " << formatTrace(*v.witness) << "\n";
      return v.equivalent ? kExitOk : kExitFail;
    }

    if (*bsnni) {
      std::vector<EquivalenceKind> kinds;
      for (const std::string& k : bsnniKinds) kinds.push_back(equivalence::parseKind(k));
      if (kinds.empty()) kinds = {EquivalenceKind::Weak, EquivalenceKind::Branching};
      if (verbose) trace::enable(true);
      const GateSet highGates = parseGates(high);
      lts::Lts l = exploreModel(bsnniFlags, out);
      if (output) {
        aut::writeAutFile(lts::cutLabels(l, highGates), *output + "/cut.aut");
        aut::writeAutFile(lts::hideLabels(l, highGates), *output + "/hide.aut");
      }
      const auto verdicts =
          noninterference::bsnni(std::move(l), highGates, kinds, noninterference::BsnniOptions{!noMinimize});
      bool allPass = true;
      for (const auto& v : verdicts) {
        const std::string kind(equivalence::kindName(v.kind));
        out << "# " << kind << ": cut " << v.cut.states << "/" << v.cut.transitions << ", hide " << v.hide.states
            << "/" << v.hide.transitions << ", compared " << v.cutCompared.states << "/"
            << v.cutCompared.transitions << " vs " << v.hideCompared.states << "/" << v.hideCompared.transitions
            << " (states/transitions)\n";
        if (v.witness) out << "# " << kind << " witness: " << formatTrace(*v.witness) << "\n";
      }
      for (const auto& v : verdicts) {
        out << noninterference::verdictLine(v) << "\n";
        allPass = allPass && v.pass;
      }
      return allPass ? kExitOk : kExitFail;
    }

    if (*query) {
      const lts::Lts l = aut::readAutFile(queryFile);
      const std::string gate = lower(queryGate);
      if (!hasGate(l, gate)) {
        err << "warning: gate " << queryGate << " does not occur in " << queryFile << "\n";
        out << "UNREACHABLE\n";
        return kExitFail;
      }
      if (!after) {
        const std::vector<bool> reaching = lts::statesReaching(l, gate);
        const bool r = reaching[l.initial()];
        out << (r ? "REACHABLE" : "UNREACHABLE") << "\n";
        return r ? kExitOk : kExitFail;
      }
      const std::vector<bool> reaching = lts::statesReaching(l, gate, unbounded ? std::string() : lower(until));
      const std::string afterGate = lower(*after);
      const std::vector<lts::StateId> from = lts::statesEnteredBy(l, afterGate);
      if (from.empty()) {
        err << "warning: no state is entered by " << *after << "\n";
        out << "UNREACHABLE\n";
        return kExitFail;
      }
      const auto count = static_cast<std::size_t>(
          std::count_if(from.begin(), from.end(), [&](lts::StateId s) { return reaching[s]; }));
      out << "# states entered by " << *after << ": " << from.size() << ", reaching " << queryGate << ": " << count
          << "\n";
      if (count == from.size()) {
        out << "REACHABLE\n";
        return kExitOk;
      }
      out << (count == 0 ? "UNREACHABLE" : "PARTIALLY_REACHABLE") << "\n";
      return kExitFail;
    }

    if (*simulate) {
      const model::ModelParams p = simFlags.params();
      const auto adversary = montecarlo::Adversary::parse(adversaryText);
      const auto stats = montecarlo::estimate(p, adversary, trials, seed, stepCap);
      const std::string line = montecarlo::toJsonLine(p, adversary, stats);
      out << line << "\n";
      if (output) {
        std::ofstream f(*output, std::ios::app);
        if (!f || !(f << line << "\n")) throw Error("cannot append to '" + *output + "'");
      }
      return stats.completed > 0 ? kExitOk : kExitFail;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace bbacheck::cli
