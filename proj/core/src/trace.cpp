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

#include "bbacheck/trace.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>

namespace bbacheck::trace {

namespace {

std::atomic<int>& state() {
  static std::atomic<int> s{-1};
  return s;
}

const auto kStart = std::chrono::steady_clock::now();

}  // namespace

void enable(bool on) { state() = on ? 1 : 0; }

bool enabled() {
  int s = state().load(std::memory_order_relaxed);
  if (s < 0) {
    const char* env = std::getenv("BBACHECK_TRACE");
    s = env && *env ? 1 : 0;
    state() = s;
  }
  return s == 1;
}

void write(const std::string& message) {
  const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - kStart).count();
  std::fprintf(stderr, "[%9.2fs] %s\n", t, message.c_str());
}

}  // namespace bbacheck::trace
