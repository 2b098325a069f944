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

#ifndef BBACHECK_TRACE_HPP_
#define BBACHECK_TRACE_HPP_

#include <sstream>
#include <string>

namespace bbacheck::trace {

// Progress messages go to stderr when enabled, either here or by setting
// the BBACHECK_TRACE environment variable to a non-empty value.
void enable(bool on);
bool enabled();
void write(const std::string& message);

template <class... Args>
void log(const Args&... args) {
  if (!enabled()) return;
  std::ostringstream os;
  (os << ... << args);
  write(os.str());
}

}  // namespace bbacheck::trace

#endif  // BBACHECK_TRACE_HPP_
