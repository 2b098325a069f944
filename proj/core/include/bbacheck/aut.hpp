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

#ifndef BBACHECK_AUT_HPP_
#define BBACHECK_AUT_HPP_

#include <iosfwd>
#include <string>
#include <string_view>

#include "bbacheck/error.hpp"
#include "bbacheck/lts.hpp"

// Aldebaran text format.
//
//   des (<initial>, <numTransitions>, <numStates>)
//   (<src>, "<LABEL>", <dst>)
//
// Gates are written in upper case with arguments as ` !ARG`; the silent
// action is `i`. Nat arguments are decimal integers; probabilities are
// decimals containing a '.' or exact fractions `n/d`.
namespace bbacheck::aut {

class AutParseError : public Error {
 public:
  AutParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::string formatLabel(const lts::ActionLabel& label);
// Throws InvalidArgument on text that is not a label.
lts::ActionLabel parseLabel(std::string_view text);

std::string writeAut(const lts::Lts& lts);
void writeAut(const lts::Lts& lts, std::ostream& out);
lts::Lts readAut(std::string_view text);
lts::Lts readAut(std::istream& in);

void writeAutFile(const lts::Lts& lts, const std::string& path);
lts::Lts readAutFile(const std::string& path);

}  // namespace bbacheck::aut

#endif  // BBACHECK_AUT_HPP_
