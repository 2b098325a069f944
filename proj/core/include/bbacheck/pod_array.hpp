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

#ifndef BBACHECK_POD_ARRAY_HPP_
#define BBACHECK_POD_ARRAY_HPP_

#include <cstdlib>
#include <cstring>
#include <new>
#include <type_traits>
#include <utility>

namespace bbacheck::detail {

// Growable array of trivially copyable values backed by realloc, so large
// buffers grow in place when the allocator can remap them.
template <class T>
class PodArray {
  static_assert(std::is_trivially_copyable_v<T>);

 public:
  PodArray() = default;
  explicit PodArray(std::size_t n, T fill = T{}) {
    resize(n);
    for (std::size_t i = 0; i < n; ++i) data_[i] = fill;
  }
  PodArray(const PodArray& o) { assign(o.data_, o.size_); }
  PodArray& operator=(const PodArray& o) {
    if (this != &o) assign(o.data_, o.size_);
    return *this;
  }
  PodArray(PodArray&& o) noexcept { swap(o); }
  PodArray& operator=(PodArray&& o) noexcept {
    PodArray tmp(std::move(o));
    swap(tmp);
    return *this;
  }
  ~PodArray() { std::free(data_); }

  void swap(PodArray& o) noexcept {
    std::swap(data_, o.data_);
    std::swap(size_, o.size_);
    std::swap(cap_, o.cap_);
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  T* data() { return data_; }
  const T* data() const { return data_; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }
  T* begin() { return data_; }
  T* end() { return data_ + size_; }
  const T* begin() const { return data_; }
  const T* end() const { return data_ + size_; }
  T& back() { return data_[size_ - 1]; }

  void reserve(std::size_t n) {
    if (n <= cap_) return;
    void* p = std::realloc(data_, n * sizeof(T));
    if (!p) throw std::bad_alloc();
    data_ = static_cast<T*>(p);
    cap_ = n;
  }
  // New elements are left uninitialized.
  void resize(std::size_t n) {
    reserve(n);
    size_ = n;
  }
  void push_back(T v) {
    if (size_ == cap_) reserve(cap_ < 16 ? 16 : cap_ + cap_ / 2);
    data_[size_++] = v;
  }
  void clear() { size_ = 0; }
  void shrink_to_fit() {
    if (cap_ == size_) return;
    if (size_ == 0) {
      std::free(data_);
      data_ = nullptr;
      cap_ = 0;
      return;
    }
    void* p = std::realloc(data_, size_ * sizeof(T));
    if (p) {
      data_ = static_cast<T*>(p);
      cap_ = size_;
    }
  }

 private:
  void assign(const T* src, std::size_t n) {
    resize(n);
    if (n) std::memcpy(data_, src, n * sizeof(T));
  }

  T* data_ = nullptr;
  std::size_t size_ = 0;
  std::size_t cap_ = 0;
};

}  // namespace bbacheck::detail

#endif  // BBACHECK_POD_ARRAY_HPP_
