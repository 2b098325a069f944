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

#include "bbacheck/model.hpp"

#include <fstream>
#include <sstream>

namespace bbacheck::model {

using calculus::ActionLabel;
using calculus::Environment;
using calculus::GateSet;
using calculus::Term;
using calculus::TermKind;
using calculus::Value;
namespace g = calculus::gates;

Rational pH(const Rational& h) {
  if (h < Rational(0) || h > Rational(1)) throw InvalidArgument("pH needs 0 <= h <= 1, got " + h.toString());
  const Rational h2 = h * h;
  return h2 * (Rational(1) + h - h2);
}

Rational pV(Nat c, Nat n) {
  if (c < 1 || c > n) {
    throw InvalidArgument("pV needs 1 <= c <= n, got c=" + std::to_string(c) + " n=" + std::to_string(n));
  }
  return Rational(c, n);
}

const char* stepName(StepClass s) {
  switch (s) {
    case StepClass::Init: return "S_INIT";
    case StepClass::Zero: return "S_ZERO";
    case StepClass::One: return "S_ONE";
    case StepClass::Two: return "S_TWO";
  }
  return "?";
}

Nat ModelParams::threshold() const {
  return voteThreshold ? *voteThreshold : (2 * committeeSize + 2) / 3;
}

Rational ModelParams::inProbability() const {
  return pIn ? *pIn : pV(committeeSize, total());
}

Rational ModelParams::zeroProbability() const { return pZero ? *pZero : pH(hFraction); }

void ModelParams::validate() const {
  const Nat n = total();
  if (n < 1) throw InvalidArgument("the network needs at least one node");
  if (committeeSize < 1 || committeeSize > n) {
    throw InvalidArgument("committee size must be in 1.." + std::to_string(n));
  }
  const Nat v = threshold();
  if (v < 1 || v > n) throw InvalidArgument("vote threshold must be in 1.." + std::to_string(n));
  if (hFraction < Rational(0) || hFraction > Rational(1)) throw InvalidArgument("h must be in [0, 1]");
  if (!isProbability(inProbability())) throw InvalidArgument("pIn must be in (0, 1]");
  if (!isProbability(zeroProbability())) throw InvalidArgument("pZero must be in (0, 1]");
}

std::string ModelParams::describe() const {
  std::ostringstream os;
  os << "nHonest=" << nHonest << " nMalicious=" << nMalicious << " committee=" << committeeSize
     << " V=" << threshold() << " pIn=" << inProbability() << " pZero=" << zeroProbability();
  return os.str();
}

namespace {

Nat parseNat(std::string_view key, std::string_view v) {
  try {
    Rational r = Rational::parse(v);
    if (r.den() == 1 && r.num() >= 0 && r.num() <= 0xffff && v.find_first_of("./") == std::string_view::npos) {
      return static_cast<Nat>(r.num());
    }
  } catch (const InvalidArgument&) {
  }
  throw InvalidArgument("config key '" + std::string(key) + "' needs a natural number, got '" + std::string(v) + "'");
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

}  // namespace

ModelParams parseConfig(std::string_view text, ModelParams base) {
  std::size_t lineNo = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("config line " + std::to_string(lineNo) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    auto prob = [&] {
      try {
        return Rational::parse(value);
      } catch (const InvalidArgument& e) {
        throw InvalidArgument("config line " + std::to_string(lineNo) + ": " + e.what());
      }
    };
    if (key == "nHonest") {
      base.nHonest = parseNat(key, value);
    } else if (key == "nMalicious") {
      base.nMalicious = parseNat(key, value);
    } else if (key == "committeeSize") {
      base.committeeSize = parseNat(key, value);
    } else if (key == "voteThreshold") {
      base.voteThreshold = parseNat(key, value);
    } else if (key == "pIn") {
      base.pIn = prob();
    } else if (key == "hFraction") {
      base.hFraction = prob();
    } else if (key == "pZero") {
      base.pZero = prob();
    } else {
      throw InvalidArgument("config line " + std::to_string(lineNo) + ": unknown key '" + std::string(key) + "'");
    }
  }
  return base;
}

ModelParams loadConfigFile(const std::string& path, ModelParams base) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseConfig(buf.str(), std::move(base));
}

const GateSet& Model::roundGates() {
  static const GateSet s{std::string(g::kReceiveBlockProposal), std::string(g::kSync), std::string(g::kPropagate),
                         std::string(g::kCommitProposedBlock), std::string(g::kCommitEmptyBlock)};
  return s;
}

const GateSet& Model::nodeGates() {
  static const GateSet s{std::string(g::kAsk), std::string(g::kReply), std::string(g::kSelfVerify)};
  return s;
}

Model::Model(ModelParams params) : params_(std::move(params)) {
  params_.validate();
  install();
}

void Model::checkId(Nat id, bool malicious) const {
  const Nat lo = malicious ? params_.nHonest + 1 : 1;
  const Nat hi = malicious ? params_.total() : params_.nHonest;
  if (id < lo || id > hi) {
    throw InvalidArgument(std::string(malicious ? "malicious" : "honest") + " node id " + std::to_string(id) +
                          " outside " + std::to_string(lo) + ".." + std::to_string(hi));
  }
}

void Model::install() {
  const Nat total = params_.total();
  const Nat v = params_.threshold();
  const Rational pIn = params_.inProbability();
  const Rational pZero = params_.zeroProbability();

  auto nat = [](std::span<const Value> a, std::size_t i) { return std::get<Nat>(a[i]); };
  auto label = [](std::string_view gate, std::vector<Value> args = {}) {
    return ActionLabel::visible(std::string(gate), std::move(args));
  };
  auto restart = [](Environment& e, Nat id, Nat role) {
    return e.call(role == static_cast<Nat>(Role::Honest) ? "N" : "MN", {Value(id)});
  };
  // ask(bit) followed by every possible reply; `then(k)` continues.
  auto askReply = [total, label](Environment& e, Nat bit, auto then) {
    std::vector<Term> replies;
    replies.reserve(total + 1);
    for (Nat k = 0; k <= total; ++k) replies.push_back(e.prefix(label(g::kReply, {Value(k)}), then(k)));
    return e.prefix(label(g::kAsk, {Value(bit)}), e.choice(replies));
  };

  env_.define("N", 1, [label](Environment& e, std::span<const Value> a) {
    return e.prefix(label(g::kReceiveBlockProposal),
                    e.call("NPrime", {a[0], Value(static_cast<Nat>(Role::Honest))}));
  });

  env_.define("MN", 1, [label](Environment& e, std::span<const Value> a) {
    Term boycott = e.prefix(label(g::kBoycott), e.call("NPrime", {a[0], Value(static_cast<Nat>(Role::Boycotting))}));
    Term decline = e.prefix(ActionLabel::tau(), e.call("NPrime", {a[0], Value(static_cast<Nat>(Role::Cooperating))}));
    return e.prefix(label(g::kReceiveBlockProposal), e.choice(boycott, decline));
  });

  env_.define("NPrime", 2, [label, pZero](Environment& e, std::span<const Value> a) {
    auto second = [&](Nat bit) {
      return e.call("NSecond", {a[0], a[1], Value(static_cast<Nat>(StepClass::Init)), Value(bit)});
    };
    return e.prefix(label(g::kComputeBit), e.probChoice(pZero, second(0), second(1)));
  });

  env_.define("NSecond", 4, [label, nat, pIn](Environment& e, std::span<const Value> a) {
    const Nat id = nat(a, 0), role = nat(a, 1), bit = nat(a, 3);
    const auto step = static_cast<StepClass>(nat(a, 2));
    Term next;
    switch (step) {
      case StepClass::Init:
        next = e.call("NThird", {a[0], a[1], Value(static_cast<Nat>(StepClass::Zero))});
        break;
      case StepClass::Zero:
        next = e.call("NThird", {a[0], a[1], Value(static_cast<Nat>(StepClass::One))});
        break;
      case StepClass::One:
        next = e.call("NFourth", {a[0], a[1], Value(static_cast<Nat>(StepClass::Two))});
        break;
      case StepClass::Two:
        throw InvalidArgument("NSecond is never entered in S_TWO");
    }
    const Nat vote = role == static_cast<Nat>(Role::Boycotting) ? 1 : bit;
    Term sync = e.prefix(label(g::kSync), next);
    Term in = e.prefix(label(g::kPropagate, {Value(id), Value(vote)}), sync);
    return e.prefix(label(g::kSelfVerify), e.probChoice(pIn, in, sync));
  });

  env_.define("NThird", 3, [label, nat, v, askReply, restart](Environment& e, std::span<const Value> a) {
    const Nat id = nat(a, 0), role = nat(a, 1);
    const auto step = static_cast<StepClass>(nat(a, 2));
    if (step != StepClass::Zero && step != StepClass::One) throw InvalidArgument("NThird needs S_ZERO or S_ONE");
    const bool zero = step == StepClass::Zero;
    return askReply(e, zero ? 0 : 1, [&](Nat k) {
      if (k >= v) return e.prefix(label(zero ? g::kCommitProposedBlock : g::kCommitEmptyBlock), restart(e, id, role));
      return e.call("NFourth", {a[0], a[1], a[2]});
    });
  });

  env_.define("NFourth", 3, [label, nat, v, askReply](Environment& e, std::span<const Value> a) {
    const auto step = static_cast<StepClass>(nat(a, 2));
    auto second = [&](StepClass s, Nat bit) {
      return e.call("NSecond", {a[0], a[1], Value(static_cast<Nat>(s)), Value(bit)});
    };
    Term body;
    switch (step) {
      case StepClass::Zero:
        body = askReply(e, 1, [&](Nat k) { return second(StepClass::Zero, k >= v ? 1 : 0); });
        break;
      case StepClass::One:
        body = askReply(e, 0, [&](Nat k) { return second(StepClass::One, k >= v ? 0 : 1); });
        break;
      case StepClass::Two:
        body = askReply(e, 0, [&](Nat k) {
          if (k >= v) return second(StepClass::Init, 0);
          return askReply(e, 1, [&](Nat k1) {
            if (k1 >= v) return second(StepClass::Init, 1);
            return e.call("NPrime", {a[0], a[1]});
          });
        });
        break;
      case StepClass::Init:
        throw InvalidArgument("NFourth is never entered in S_INIT");
    }
    return e.prefix(label(g::kAdjustBit), body);
  });

  env_.define("C", 3, [label, nat, total](Environment& e, std::span<const Value> a) {
    const Nat id = nat(a, 0), k0 = nat(a, 1), k1 = nat(a, 2);
    auto self = [&](Nat x0, Nat x1) { return e.call("C", {a[0], Value(x0), Value(x1)}); };
    std::vector<Term> summands;
    for (Nat j = 1; j <= total; ++j) {
      if (j == id) continue;
      summands.push_back(e.prefix(label(g::kPropagate, {Value(j), Value(Nat{0})}), self(std::min(k0 + 1, total), k1)));
      summands.push_back(e.prefix(label(g::kPropagate, {Value(j), Value(Nat{1})}), self(k0, std::min(k1 + 1, total))));
    }
    Term here = self(k0, k1);
    summands.push_back(e.prefix(label(g::kAsk, {Value(Nat{0})}), e.prefix(label(g::kReply, {Value(k0)}), here)));
    summands.push_back(e.prefix(label(g::kAsk, {Value(Nat{1})}), e.prefix(label(g::kReply, {Value(k1)}), here)));
    summands.push_back(e.prefix(label(g::kSelfVerify), self(0, 0)));
    return e.choice(summands);
  });
}

Term Model::counter(Nat id, Nat k0, Nat k1) {
  if (id < 1 || id > params_.total()) throw InvalidArgument("node id " + std::to_string(id) + " out of range");
  if (k0 > params_.total() || k1 > params_.total()) throw InvalidArgument("counter value above population");
  return env_.call("C", {Value(id), Value(k0), Value(k1)});
}

Term Model::honestNode(Nat id) {
  checkId(id, false);
  return env_.parallel(nodeGates(), env_.call("N", {Value(id)}), counter(id));
}

Term Model::maliciousNode(Nat id) {
  checkId(id, true);
  return env_.parallel(nodeGates(), env_.call("MN", {Value(id)}), counter(id));
}

Term Model::network() {
  std::optional<Term> honest, malicious;
  for (Nat id = 1; id <= params_.nHonest; ++id) {
    Term node = honestNode(id);
    honest = honest ? env_.parallel(roundGates(), *honest, node) : node;
  }
  GateSet withBoycott = roundGates();
  withBoycott.insert(std::string(g::kBoycott));
  for (Nat id = params_.nHonest + 1; id <= params_.total(); ++id) {
    Term node = maliciousNode(id);
    malicious = malicious ? env_.parallel(withBoycott, *malicious, node) : node;
  }
  if (honest && malicious) return env_.parallel(roundGates(), *honest, *malicious);
  return honest ? *honest : *malicious;
}

std::vector<NodeView> Model::inspect(Term state) const {
  std::vector<NodeView> out;
  const GateSet& local = nodeGates();
  auto fail = [] { throw InvalidArgument("term is not a network state of this model"); };
  auto isNodeSet = [&](std::uint32_t setId) {
    auto names = env_.gateSetNames(setId);
    return GateSet(names.begin(), names.end()) == local;
  };
  std::vector<Term> stack{state};
  while (!stack.empty()) {
    Term t = stack.back();
    stack.pop_back();
    const auto& n = env_.node(t);
    if (n.kind != TermKind::Parallel) fail();
    if (!isNodeSet(n.a)) {
      stack.push_back(Term{n.c});
      stack.push_back(Term{n.b});
      continue;
    }
    NodeView view;
    const auto& behavior = env_.node(Term{n.b});
    if (behavior.kind == TermKind::Call) {
      view.behavior = env_.definitionName(behavior.a);
      auto args = env_.tuple(behavior.b);
      view.behaviorArgs.assign(args.begin(), args.end());
    }
    Term c{n.c};
    if (env_.kind(c) == TermKind::Prefix) c = Term{env_.node(c).b};
    const auto& cn = env_.node(c);
    if (cn.kind != TermKind::Call || env_.definitionName(cn.a) != "C") fail();
    auto args = env_.tuple(cn.b);
    view.id = std::get<Nat>(args[0]);
    view.k0 = std::get<Nat>(args[1]);
    view.k1 = std::get<Nat>(args[2]);
    view.malicious = view.id > params_.nHonest;
    out.push_back(std::move(view));
  }
  return out;
}

}  // namespace bbacheck::model
