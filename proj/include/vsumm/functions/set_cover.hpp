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

// Coverage objectives over a universe U of discrete concepts (labels).

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "vsumm/functions/set_function.hpp"

namespace vsumm {

namespace detail {

inline std::vector<double> unit_weights_if_empty(std::vector<double> weights, std::size_t universe) {
  if (weights.empty()) weights.assign(universe, 1.0);
  if (weights.size() != universe) throw InvalidArgument("concept weight count does not match the universe");
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("concept weights must be finite and >= 0");
  }
  return weights;
}

}  // namespace detail

// f(X) = w(union_{i in X} U_i). Statistics: the covered-concept set.
class SetCover {
 public:
  static constexpr bool kMonotoneSubmodular = true;

  struct Stats {
    std::vector<char> covered;

    bool operator==(const Stats&) const = default;
  };

  // concepts[i] lists U_i; empty weights mean unit weights.
  SetCover(std::vector<std::vector<std::size_t>> concepts, std::size_t universe,
           std::vector<double> weights = {})
      : concepts_(std::move(concepts)), weights_(detail::unit_weights_if_empty(std::move(weights), universe)),
        sel_(concepts_.size()) {
    for (auto& list : concepts_) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      if (!list.empty() && list.back() >= universe) throw InvalidArgument("concept id outside the universe");
    }
    stats_.covered.assign(universe, 0);
  }

  std::string name() const { return "sc"; }
  std::size_t size() const { return concepts_.size(); }
  std::size_t universe() const { return weights_.size(); }
  std::span<const std::size_t> concepts_of(std::size_t i) const { return concepts_.at(i); }
  std::span<const double> weights() const { return weights_; }

  double evaluate(std::span<const std::size_t> xs) const {
    std::vector<char> covered(universe(), 0);
    for (std::size_t i : detail::as_set(xs, size())) {
      for (std::size_t u : concepts_[i]) covered[u] = 1;
    }
    double total = 0.0;
    for (std::size_t u = 0; u < universe(); ++u) {
      if (covered[u]) total += weights_[u];
    }
    return total;
  }

  // w(P u U_j) - w(P), O(|U_j|).
  double gain(std::size_t j) const {
    sel_.check_candidate(j);
    double g = 0.0;
    for (std::size_t u : concepts_[j]) {
      if (!stats_.covered[u]) g += weights_[u];
    }
    return g;
  }

  void commit(std::size_t j) {
    value_ += gain(j);
    for (std::size_t u : concepts_[j]) stats_.covered[u] = 1;
    sel_.add(j);
  }

  void reset() {
    std::fill(stats_.covered.begin(), stats_.covered.end(), 0);
    value_ = 0.0;
    sel_.clear();
  }

  double value() const { return value_; }
  std::span<const std::size_t> selected() const { return sel_.members(); }
  bool contains(std::size_t j) const { return sel_.contains(j); }
  const Stats& stats() const { return stats_; }

  Stats stats_for(std::span<const std::size_t> xs) const {
    Stats out{std::vector<char>(universe(), 0)};
    for (std::size_t i : detail::as_set(xs, size())) {
      for (std::size_t u : concepts_[i]) out.covered[u] = 1;
    }
    return out;
  }

 private:
  std::vector<std::vector<std::size_t>> concepts_;
  std::vector<double> weights_;
  detail::Selection sel_;
  Stats stats_;
  double value_ = 0.0;
};

struct ConceptProbability {
  std::size_t concept_id = 0;
  double p = 0.0;

  bool operator==(const ConceptProbability&) const = default;
};

// f(X) = sum_{u in U} w_u [1 - prod_{k in X} (1 - p_uk)].
// Statistics: residual[u] = prod_{k in X} (1 - p_uk). The gain keeps the
// concept weight: f(j | X) = sum_u w_u residual[u] p_uj.
class ProbabilisticSetCover {
 public:
  static constexpr bool kMonotoneSubmodular = true;

  struct Stats {
    std::vector<double> residual;

    bool operator==(const Stats&) const = default;
  };

  ProbabilisticSetCover(std::vector<std::vector<ConceptProbability>> probs, std::size_t universe,
                        std::vector<double> weights = {})
      : probs_(std::move(probs)), weights_(detail::unit_weights_if_empty(std::move(weights), universe)),
        sel_(probs_.size()) {
    for (auto& list : probs_) {
      std::sort(list.begin(), list.end(),
                [](const ConceptProbability& a, const ConceptProbability& b) { return a.concept_id < b.concept_id; });
      for (std::size_t k = 0; k < list.size(); ++k) {
        if (list[k].concept_id >= universe) throw InvalidArgument("concept id outside the universe");
        if (!(list[k].p >= 0.0 && list[k].p <= 1.0)) throw InvalidArgument("concept probability outside [0,1]");
        if (k > 0 && list[k].concept_id == list[k - 1].concept_id) {
          throw InvalidArgument("duplicate concept in an item's probability list");
        }
      }
    }
    stats_.residual.assign(universe, 1.0);
  }

  std::string name() const { return "psc"; }
  std::size_t size() const { return probs_.size(); }
  std::size_t universe() const { return weights_.size(); }
  std::span<const ConceptProbability> probabilities_of(std::size_t i) const { return probs_.at(i); }

  double evaluate(std::span<const std::size_t> xs) const {
    std::vector<double> residual(universe(), 1.0);
    for (std::size_t i : detail::as_set(xs, size())) {
      for (const auto& [u, p] : probs_[i]) residual[u] *= 1.0 - p;
    }
    double total = 0.0;
    for (std::size_t u = 0; u < universe(); ++u) total += weights_[u] * (1.0 - residual[u]);
    return total;
  }

  double gain(std::size_t j) const {
    sel_.check_candidate(j);
    double g = 0.0;
    for (const auto& [u, p] : probs_[j]) g += weights_[u] * stats_.residual[u] * p;
    return g;
  }

  void commit(std::size_t j) {
    value_ += gain(j);
    for (const auto& [u, p] : probs_[j]) stats_.residual[u] *= 1.0 - p;
    sel_.add(j);
  }

  void reset() {
    std::fill(stats_.residual.begin(), stats_.residual.end(), 1.0);
    value_ = 0.0;
    sel_.clear();
  }

  double value() const { return value_; }
  std::span<const std::size_t> selected() const { return sel_.members(); }
  bool contains(std::size_t j) const { return sel_.contains(j); }
  const Stats& stats() const { return stats_; }

  Stats stats_for(std::span<const std::size_t> xs) const {
    Stats out{std::vector<double>(universe(), 1.0)};
    for (std::size_t i : detail::as_set(xs, size())) {
      for (const auto& [u, p] : probs_[i]) out.residual[u] *= 1.0 - p;
    }
    return out;
  }

 private:
  std::vector<std::vector<ConceptProbability>> probs_;
  std::vector<double> weights_;
  detail::Selection sel_;
  Stats stats_;
  double value_ = 0.0;
};

}  // namespace vsumm
