// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Shared contract for the summarization objectives.
//
// Every objective is bound to a ground set of size n and carries mutable
// precompute statistics for the current selection X:
//
//   evaluate(X)  f(X) from scratch, ignoring the statistics
//   gain(j)      f(j | X) from the statistics (read-only, may run
//                concurrently with other gain calls)
//   commit(j)    X <- X + j, updating the statistics (exclusive)
//   value()      f(X) tracked incrementally
//   reset()      X <- empty set
//
// kMonotoneSubmodular tells the optimizers whether stale gains are valid
// upper bounds and whether the cover problem is meaningful.

#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vsumm/error.hpp"

namespace vsumm {

template <class F>
concept SetFunction = requires(F& f, const F& cf, std::size_t j, std::span<const std::size_t> xs) {
  { cf.size() } -> std::convertible_to<std::size_t>;
  { cf.evaluate(xs) } -> std::convertible_to<double>;
  { cf.gain(j) } -> std::convertible_to<double>;
  { cf.value() } -> std::convertible_to<double>;
  { cf.selected() } -> std::convertible_to<std::span<const std::size_t>>;
  { cf.contains(j) } -> std::convertible_to<bool>;
  { cf.name() } -> std::convertible_to<std::string>;
  f.commit(j);
  f.reset();
  { F::kMonotoneSubmodular } -> std::convertible_to<bool>;
};

namespace detail {

// Membership bookkeeping shared by all objectives.
class Selection {
 public:
  explicit Selection(std::size_t n = 0) : in_(n, 0) {}

  std::size_t universe() const { return in_.size(); }
  std::span<const std::size_t> members() const { return members_; }
  bool contains(std::size_t j) const { return j < in_.size() && in_[j]; }

  void check_candidate(std::size_t j) const {
    if (j >= in_.size()) {
      throw std::out_of_range("item " + std::to_string(j) + " out of range for n=" + std::to_string(in_.size()));
    }
    if (in_[j]) throw InvalidArgument("item " + std::to_string(j) + " is already selected");
  }

  void add(std::size_t j) {
    in_[j] = 1;
    members_.push_back(j);
  }

  void clear() {
    std::fill(in_.begin(), in_.end(), 0);
    members_.clear();
  }

 private:
  std::vector<char> in_;
  std::vector<std::size_t> members_;
};

// Sorted, de-duplicated copy of xs; throws on out-of-range ids.
inline std::vector<std::size_t> as_set(std::span<const std::size_t> xs, std::size_t n) {
  std::vector<std::size_t> out(xs.begin(), xs.end());
  for (std::size_t x : out) {
    if (x >= n) throw std::out_of_range("item " + std::to_string(x) + " out of range for n=" + std::to_string(n));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

// Convenience: f(X) for a braced list of ids.
template <SetFunction F>
double evaluate(const F& f, std::initializer_list<std::size_t> xs) {
  return f.evaluate(std::span<const std::size_t>(xs.begin(), xs.size()));
}

}  // namespace vsumm
