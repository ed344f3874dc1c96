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

#pragma once

#include <algorithm>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vsumm/functions/set_function.hpp"
#include "vsumm/kernel.hpp"

namespace vsumm {

// Diversity: f(X) = min_{k != l in X} d_kl with d = 1 - s.
//
// Neither monotone nor submodular. f is 0 on sets of size <= 1. The
// statistics are the current minimum pairwise distance (+inf below two
// members) and the member list, so a gain costs O(|X|):
//   |X| = 0:  f(j | X) = 0
//   |X| = 1:  f(j | X) = d_xj
//   |X| >= 2: f(j | X) = min(p, min_{k in X} d_kj) - p
//
// priority(j) ranks candidates for the greedy step: the distance row sum
// on the empty set, min_{k in X} d_kj afterwards. It only ever decreases as
// X grows, so stale priorities are valid upper bounds. priority() keeps a
// per-item running minimum and folds in only the members added since the
// item's last refresh; unlike gain() it must not run concurrently.
class DisparityMin {
 public:
  static constexpr bool kMonotoneSubmodular = false;

  struct Stats {
    double min_distance = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> members;

    bool operator==(const Stats&) const = default;
  };

  explicit DisparityMin(std::shared_ptr<const SimilarityKernel> kernel)
      : kernel_(std::move(kernel)), sel_(kernel_->size()) {}

  std::string name() const { return "dm"; }
  std::size_t size() const { return kernel_->size(); }
  const SimilarityKernel& kernel() const { return *kernel_; }

  double distance(std::size_t i, std::size_t j) const { return 1.0 - (*kernel_)(i, j); }

  double evaluate(std::span<const std::size_t> xs) const {
    const auto set = detail::as_set(xs, size());
    if (set.size() < 2) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < set.size(); ++a) {
      for (std::size_t b = a + 1; b < set.size(); ++b) best = std::min(best, distance(set[a], set[b]));
    }
    return best;
  }

  // min_{k in X} d_kj; +inf on the empty set.
  double distance_to_selection(std::size_t j) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k : stats_.members) best = std::min(best, distance(k, j));
    return best;
  }

  double gain(std::size_t j) const {
    sel_.check_candidate(j);
    const std::size_t m = stats_.members.size();
    if (m == 0) return 0.0;
    const double to_set = distance_to_selection(j);
    if (m == 1) return to_set;
    return std::min(stats_.min_distance, to_set) - stats_.min_distance;
  }

  double priority(std::size_t j) const {
    sel_.check_candidate(j);
    const std::size_t m = stats_.members.size();
    if (m == 0) return kernel_->distance_row_sum(j);
    if (nearest_.empty()) {
      nearest_.assign(size(), std::numeric_limits<double>::infinity());
      folded_.assign(size(), 0);
    }
    double& best = nearest_[j];
    for (std::size_t a = folded_[j]; a < m; ++a) best = std::min(best, distance(stats_.members[a], j));
    folded_[j] = m;
    return best;
  }

  void commit(std::size_t j) {
    sel_.check_candidate(j);
    stats_.min_distance = std::min(stats_.min_distance, distance_to_selection(j));
    stats_.members.push_back(j);
    sel_.add(j);
  }

  void reset() {
    stats_ = Stats{};
    sel_.clear();
    nearest_.clear();
    folded_.clear();
  }

  double value() const { return stats_.members.size() < 2 ? 0.0 : stats_.min_distance; }
  std::span<const std::size_t> selected() const { return sel_.members(); }
  bool contains(std::size_t j) const { return sel_.contains(j); }
  const Stats& stats() const { return stats_; }

  Stats stats_for(std::span<const std::size_t> xs) const {
    Stats out;
    out.members.assign(xs.begin(), xs.end());
    for (std::size_t a = 0; a < xs.size(); ++a) {
      for (std::size_t b = a + 1; b < xs.size(); ++b) {
        out.min_distance = std::min(out.min_distance, distance(xs[a], xs[b]));
      }
    }
    return out;
  }

 private:
  std::shared_ptr<const SimilarityKernel> kernel_;
  detail::Selection sel_;
  Stats stats_;
  mutable std::vector<double> nearest_;
  mutable std::vector<std::size_t> folded_;
};

}  // namespace vsumm
