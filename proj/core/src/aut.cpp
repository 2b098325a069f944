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

#include "bbacheck/aut.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace bbacheck::aut {

using calculus::ActionLabel;
using calculus::Nat;
using calculus::Value;
using detail::PodArray;

AutParseError::AutParseError(std::size_t line, const std::string& what)
    : Error("aut line " + std::to_string(line) + ": " + what), line_(line) {}

std::string formatLabel(const ActionLabel& label) {
  if (label.isSilent()) return "i";
  std::string out;
  for (char c : label.gate()) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const Value& v : label.args()) {
    out += " !";
    out += calculus::renderValue(v);
  }
  return out;
}

namespace {

Value parseValue(std::string_view tok) {
  if (tok.find_first_of("./") != std::string_view::npos) return Value(Rational::parse(tok));
  Nat n = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), n);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw InvalidArgument("bad label argument '" + std::string(tok) + "'");
  }
  return Value(n);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Parses an unsigned decimal, advancing `s`.
bool takeIndex(std::string_view& s, std::uint64_t& out) {
  s = trim(s);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr == s.data()) return false;
  s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  return true;
}

bool takeChar(std::string_view& s, char c) {
  s = trim(s);
  if (s.empty() || s.front() != c) return false;
  s.remove_prefix(1);
  return true;
}

// Line sources for the two reader entry points.
class TextLines {
 public:
  explicit TextLines(std::string_view text) : text_(text) {}
  bool next(std::string_view& line) {
    if (text_.empty()) return false;
    const std::size_t nl = text_.find('\n');
    line = text_.substr(0, nl);
    text_ = nl == std::string_view::npos ? std::string_view{} : text_.substr(nl + 1);
    return true;
  }

 private:
  std::string_view text_;
};

class StreamLines {
 public:
  explicit StreamLines(std::istream& in) : in_(in) {}
  bool next(std::string_view& line) {
    if (!std::getline(in_, buf_)) return false;
    line = buf_;
    return true;
  }

 private:
  std::istream& in_;
  std::string buf_;
};

// Accumulates transitions in row form while sources arrive in order, and
// falls back to an unordered list otherwise.
class Collector {
 public:
  Collector(std::size_t numStates) : numStates_(numStates) {
    offsets_.push_back(0);
  }

  void add(std::uint32_t src, std::uint16_t label, std::uint32_t dst) {
    if (!unordered_.empty() || src < current_) {
      if (unordered_.empty()) spill();
      unordered_.push_back({src, label, dst});
      return;
    }
    while (current_ < src) {
      offsets_.push_back(static_cast<std::uint32_t>(targets_.size()));
      ++current_;
    }
    labels_.push_back(label);
    targets_.push_back(dst);
  }

  lts::Lts finish(lts::StateId initial, std::vector<ActionLabel> labels) {
    if (!unordered_.empty()) return lts::Lts(numStates_, initial, std::move(labels), std::move(unordered_));
    while (offsets_.size() < numStates_ + 1) offsets_.push_back(static_cast<std::uint32_t>(targets_.size()));
    return lts::Lts::fromRows(numStates_, initial, std::move(labels), std::move(offsets_), std::move(labels_),
                              std::move(targets_));
  }

 private:
  void spill() {
    // offsets_ holds the start of rows 0..current_; row current_ is open.
    for (std::uint32_t s = 0; s <= current_; ++s) {
      const std::size_t b = offsets_[s];
      const std::size_t e = s < current_ ? offsets_[s + 1] : targets_.size();
      for (std::size_t t = b; t < e; ++t) unordered_.push_back({s, labels_[t], targets_[t]});
    }
    PodArray<std::uint32_t>().swap(offsets_);
    PodArray<std::uint16_t>().swap(labels_);
    PodArray<std::uint32_t>().swap(targets_);
  }

  std::size_t numStates_;
  std::uint32_t current_ = 0;
  PodArray<std::uint32_t> offsets_;
  PodArray<std::uint16_t> labels_;
  PodArray<std::uint32_t> targets_;
  std::vector<lts::LtsTransition> unordered_;
};

template <class Lines>
lts::Lts parse(Lines& lines) {
  std::size_t lineNo = 0;
  std::string_view line;
  auto nextLine = [&] {
    while (lines.next(line)) {
      ++lineNo;
      if (!trim(line).empty()) return true;
    }
    return false;
  };

  if (!nextLine()) throw AutParseError(1, "missing header");
  std::string_view h = trim(line);
  std::uint64_t initial = 0, numTrans = 0, numStates = 0;
  if (h.substr(0, 3) != "des") throw AutParseError(lineNo, "header must start with 'des'");
  h.remove_prefix(3);
  if (!takeChar(h, '(') || !takeIndex(h, initial) || !takeChar(h, ',') || !takeIndex(h, numTrans) ||
      !takeChar(h, ',') || !takeIndex(h, numStates) || !takeChar(h, ')') || !trim(h).empty()) {
    throw AutParseError(lineNo, "malformed header");
  }
  if (numStates == 0) throw AutParseError(lineNo, "no states");
  if (numStates >= 0xffffffffULL) throw AutParseError(lineNo, "too many states");
  if (initial >= numStates) throw AutParseError(lineNo, "initial state out of range");

  Collector collector(static_cast<std::size_t>(numStates));
  std::vector<ActionLabel> labels;
  std::unordered_map<ActionLabel, std::uint16_t> labelIndex;
  std::unordered_map<std::string, std::uint16_t> textIndex;
  std::uint64_t count = 0;
  while (nextLine()) {
    std::string_view s = trim(line);
    std::uint64_t src = 0, dst = 0;
    if (!takeChar(s, '(') || !takeIndex(s, src) || !takeChar(s, ',')) {
      throw AutParseError(lineNo, "malformed transition");
    }
    s = trim(s);
    std::string_view labelText;
    if (!s.empty() && s.front() == '"') {
      const std::size_t close = s.find('"', 1);
      if (close == std::string_view::npos) throw AutParseError(lineNo, "unterminated label");
      labelText = s.substr(1, close - 1);
      s.remove_prefix(close + 1);
    } else {
      const std::size_t comma = s.rfind(',');
      if (comma == std::string_view::npos) throw AutParseError(lineNo, "malformed transition");
      labelText = trim(s.substr(0, comma));
      s.remove_prefix(comma);
    }
    if (!takeChar(s, ',') || !takeIndex(s, dst) || !takeChar(s, ')') || !trim(s).empty()) {
      throw AutParseError(lineNo, "malformed transition");
    }
    if (src >= numStates || dst >= numStates) throw AutParseError(lineNo, "state index out of range");
    auto it = textIndex.find(std::string(labelText));
    if (it == textIndex.end()) {
      ActionLabel l;
      try {
        l = parseLabel(labelText);
      } catch (const InvalidArgument& e) {
        throw AutParseError(lineNo, std::string("unparsable label: ") + e.what());
      }
      auto [li, inserted] = labelIndex.emplace(l, static_cast<std::uint16_t>(labels.size()));
      if (inserted) {
        if (labels.size() >= lts::Lts::kMaxLabels) throw AutParseError(lineNo, "too many distinct labels");
        labels.push_back(std::move(l));
      }
      it = textIndex.emplace(std::string(labelText), li->second).first;
    }
    collector.add(static_cast<std::uint32_t>(src), it->second, static_cast<std::uint32_t>(dst));
    ++count;
  }
  if (count != numTrans) {
    throw AutParseError(lineNo, "header announces " + std::to_string(numTrans) + " transitions, found " +
                                    std::to_string(count));
  }
  return collector.finish(static_cast<lts::StateId>(initial), std::move(labels));
}

}  // namespace

ActionLabel parseLabel(std::string_view text) {
  text = trim(text);
  if (text == "i") return ActionLabel::tau();
  std::size_t bang = text.find('!');
  std::string gate;
  for (char c : trim(text.substr(0, bang))) gate += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::vector<Value> args;
  while (bang != std::string_view::npos) {
    const std::size_t next = text.find('!', bang + 1);
    const std::string_view tok =
        trim(next == std::string_view::npos ? text.substr(bang + 1) : text.substr(bang + 1, next - bang - 1));
    if (tok.empty()) throw InvalidArgument("empty label argument");
    args.push_back(parseValue(tok));
    bang = next;
  }
  return ActionLabel::visible(std::move(gate), std::move(args));
}

void writeAut(const lts::Lts& lts, std::ostream& out) {
  std::vector<std::string> rendered;
  rendered.reserve(lts.labels().size());
  for (const auto& l : lts.labels()) rendered.push_back(formatLabel(l));
  out << "des (" << lts.initial() << ", " << lts.numTransitions() << ", " << lts.numStates() << ")\n";
  std::string buf;
  for (lts::StateId s = 0; s < lts.numStates(); ++s) {
    for (std::size_t t = lts.outBegin(s); t < lts.outEnd(s); ++t) {
      buf += '(';
      buf += std::to_string(s);
      buf += ", \"";
      buf += rendered[lts.labelAt(t)];
      buf += "\", ";
      buf += std::to_string(lts.targetAt(t));
      buf += ")\n";
    }
    if (buf.size() > (1u << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

std::string writeAut(const lts::Lts& lts) {
  std::ostringstream os;
  writeAut(lts, os);
  return std::move(os).str();
}

lts::Lts readAut(std::string_view text) {
  TextLines lines(text);
  return parse(lines);
}

lts::Lts readAut(std::istream& in) {
  StreamLines lines(in);
  return parse(lines);
}

void writeAutFile(const lts::Lts& lts, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  writeAut(lts, out);
  out.flush();
  if (!out) throw Error("write to '" + path + "' failed");
}

lts::Lts readAutFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return readAut(in);
}

}  // namespace bbacheck::aut
