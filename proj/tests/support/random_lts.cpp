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

#include "random_lts.hpp"

namespace bbacheck::testing {

lts::Lts randomLts(std::mt19937_64& rng, const RandomLtsShape& shape) {
  std::vector<lts::ActionLabel> labels;
  if (shape.silent) labels.push_back(lts::ActionLabel::tau());
  for (const std::string& g : shape.gates) labels.push_back(lts::ActionLabel::visible(g));
  const auto n = std::uniform_int_distribution<std::size_t>(1, shape.maxStates)(rng);
  const auto m = std::uniform_int_distribution<std::size_t>(0, shape.maxTransitions)(rng);
  std::uniform_int_distribution<lts::StateId> state(0, static_cast<lts::StateId>(n - 1));
  std::uniform_int_distribution<lts::LabelIndex> label(0, static_cast<lts::LabelIndex>(labels.size() - 1));
  std::vector<lts::LtsTransition> transitions;
  for (std::size_t i = 0; i < m; ++i) {
    const lts::StateId s = state(rng);
    const lts::LabelIndex l = label(rng);
    transitions.push_back({s, l, state(rng)});
  }
  return lts::Lts(n, 0, std::move(labels), std::move(transitions));
}

}  // namespace bbacheck::testing
