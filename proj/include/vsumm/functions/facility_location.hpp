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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vsumm/functions/set_function.hpp"
#include "vsumm/kernel.hpp"

namespace vsumm {

// Representation: f(X) = sum_{i in V} max_{j in X} s_ij.
//
// Statistics: best[i] = max_{k in X} s_ik (0 for the empty set, as s >= 0).
// gain(j) = sum_i max(best[i], s_ij) - best[i], O(n) dense or O(deg j)
// on a kNN kernel, where absent entries are 0 and never raise best[i].
class FacilityLocation {
 public:
  static constexpr bool kMonotoneSubmodular = true;

  struct Stats {
    std::vector<double> best;

    bool operator==(const Stats&) const = default;
  };

  explicit FacilityLocation(std::shared_ptr<const SimilarityKernel> kernel)
      : kernel_(std::move(kernel)), sel_(kernel_->size()) {
    stats_.best.assign(kernel_->size(), 0.0);
  }

  std::string name() const { return "fl"; }
  std::size_t size() const { return kernel_->size(); }
  const SimilarityKernel& kernel() const { return *kernel_; }

  double evaluate(std::span<const std::size_t> xs) const {
    const auto set = detail::as_set(xs, size());
    if (set.empty()) return 0.0;
    const SimilarityKernel& s = *kernel_;
    double total = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      double best = 0.0;
      for (std::size_t j : set) best = std::max(best, s(i, j));
      total += best;
    }
    return total;
  }

  double gain(std::size_t j) const {
    sel_.check_candidate(j);
    double g = 0.0;
    kernel_->for_each_in_row(j, [&](std::size_t i, double sij) {
      const double p = stats_.best[i];
      if (sij > p) g += sij - p;
    });
    return g;
  }

  void commit(std::size_t j) {
    sel_.check_candidate(j);
    double g = 0.0;
    kernel_->for_each_in_row(j, [&](std::size_t i, double sij) {
      double& p = stats_.best[i];
      if (sij > p) {
        g += sij - p;
        p = sij;
      }
    });
    value_ += g;
    sel_.add(j);
  }

  void reset() {
    std::fill(stats_.best.begin(), stats_.best.end(), 0.0);
    value_ = 0.0;
    sel_.clear();
  }

  double value() const { return value_; }
  std::span<const std::size_t> selected() const { return sel_.members(); }
  bool contains(std::size_t j) const { return sel_.contains(j); }
  const Stats& stats() const { return stats_; }

  Stats stats_for(std::span<const std::size_t> xs) const {
    const auto set = detail::as_set(xs, size());
    Stats out{std::vector<double>(size(), 0.0)};
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t k : set) out.best[i] = std::max(out.best[i], (*kernel_)(i, k));
    }
    return out;
  }

 private:
  std::shared_ptr<const SimilarityKernel> kernel_;
  detail::Selection sel_;
  Stats stats_;
  double value_ = 0.0;
};

}  // namespace vsumm
