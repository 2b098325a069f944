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

#ifndef BBACHECK_STABLE_VECTOR_HPP_
#define BBACHECK_STABLE_VECTOR_HPP_

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>

namespace bbacheck::detail {

// Append-only vector whose elements never move. Chunk k holds
// kBase << k elements, so indexing is two shifts and existing references
// stay valid while other elements are appended.
template <class T>
class StableVector {
 public:
  static constexpr unsigned kBaseBits = 8;
  static constexpr std::size_t kBase = std::size_t{1} << kBaseBits;

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  const T& operator[](std::size_t i) const { return slot(i); }
  T& operator[](std::size_t i) { return slot(i); }

  std::size_t push_back(T value) {
    const std::size_t i = size_;
    const auto [chunk, offset] = locate(i);
    if (!chunks_[chunk]) chunks_[chunk] = std::make_unique<T[]>(kBase << chunk);
    chunks_[chunk][offset] = std::move(value);
    ++size_;
    return i;
  }

 private:
  static std::pair<unsigned, std::size_t> locate(std::size_t i) {
    const std::size_t j = i + kBase;
    const unsigned top = static_cast<unsigned>(std::bit_width(j)) - 1;
    return {top - kBaseBits, j - (std::size_t{1} << top)};
  }

  T& slot(std::size_t i) const {
    const auto [chunk, offset] = locate(i);
    return chunks_[chunk][offset];
  }

  std::array<std::unique_ptr<T[]>, 48> chunks_{};
  std::size_t size_ = 0;
};

}  // namespace bbacheck::detail

#endif  // BBACHECK_STABLE_VECTOR_HPP_
