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

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vsumm/functions/set_function.hpp"

namespace vsumm {

// Concave functions with psi(0) = 0. identity makes the objective modular.
enum class Concave { sqrt, log, ratio, identity };

inline std::string_view to_string(Concave psi) {
  switch (psi) {
    case Concave::sqrt: return "sqrt";
    case Concave::log: return "log";
    case Concave::ratio: return "ratio";
    case Concave::identity: return "identity";
  }
  return "sqrt";
}

inline std::optional<Concave> parse_concave(std::string_view name) {
  if (name == "sqrt") return Concave::sqrt;
  if (name == "log") return Concave::log;
  if (name == "ratio") return Concave::ratio;
  if (name == "identity") return Concave::identity;
  return std::nullopt;
}

inline double apply(Concave psi, double x) {
  switch (psi) {
    case Concave::sqrt: return std::sqrt(x);
    case Concave::log: return std::log1p(x);
    case Concave::ratio: return x / (1.0 + x);
    case Concave::identity: return x;
  }
  return x;
}

// Coverage of feature mass: f(X) = sum_{f in F} psi(sum_{j in X} q_jf),
// with q >= 0. Statistics hold the accumulated mass per feature; a gain is
// O(|F|).
class FeatureBased {
 public:
  static constexpr bool kMonotoneSubmodular = true;

  struct Stats {
    std::vector<double> mass;

    bool operator==(const Stats&) const = default;
  };

  // features is row-major n x dim.
  FeatureBased(std::vector<double> features, std::size_t dim, Concave psi)
      : features_(std::move(features)), dim_(dim), psi_(psi) {
    if (dim_ == 0) throw InvalidArgument("feature-based function needs dim >= 1");
    if (features_.size() % dim_ != 0) throw InvalidArgument("feature matrix size is not a multiple of dim");
    for (double q : features_) {
      if (!(q >= 0.0) || !std::isfinite(q)) throw InvalidArgument("feature-based function needs finite q >= 0");
    }
    n_ = features_.size() / dim_;
    sel_ = detail::Selection(n_);
    stats_.mass.assign(dim_, 0.0);
  }

  std::string name() const { return "fb:" + std::string(to_string(psi_)); }
  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }
  Concave psi() const { return psi_; }

  std::span<const double> row(std::size_t j) const { return {features_.data() + j * dim_, dim_}; }

  double evaluate(std::span<const std::size_t> xs) const {
    const auto set = detail::as_set(xs, n_);
    double total = 0.0;
    for (std::size_t f = 0; f < dim_; ++f) {
      double mass = 0.0;
      for (std::size_t j : set) mass += features_[j * dim_ + f];
      total += apply(psi_, mass);
    }
    return total;
  }

  double gain(std::size_t j) const {
    sel_.check_candidate(j);
    const double* q = features_.data() + j * dim_;
    double g = 0.0;
    for (std::size_t f = 0; f < dim_; ++f) {
      if (q[f] == 0.0) continue;
      if (psi_ == Concave::identity) {
        g += q[f];
        continue;
      }
      const double m = stats_.mass[f];
      g += apply(psi_, m + q[f]) - apply(psi_, m);
    }
    return g;
  }

  void commit(std::size_t j) {
    const double g = gain(j);
    const double* q = features_.data() + j * dim_;
    for (std::size_t f = 0; f < dim_; ++f) stats_.mass[f] += q[f];
    value_ += g;
    sel_.add(j);
  }

  void reset() {
    std::fill(stats_.mass.begin(), stats_.mass.end(), 0.0);
    value_ = 0.0;
    sel_.clear();
  }

  double value() const { return value_; }
  std::span<const std::size_t> selected() const { return sel_.members(); }
  bool contains(std::size_t j) const { return sel_.contains(j); }
  const Stats& stats() const { return stats_; }

  Stats stats_for(std::span<const std::size_t> xs) const {
    Stats out{std::vector<double>(dim_, 0.0)};
    for (std::size_t j : detail::as_set(xs, n_)) {
      for (std::size_t f = 0; f < dim_; ++f) out.mass[f] += features_[j * dim_ + f];
    }
    return out;
  }

 private:
  std::vector<double> features_;
  std::size_t dim_ = 0;
  std::size_t n_ = 0;
  Concave psi_;
  detail::Selection sel_;
  Stats stats_;
  double value_ = 0.0;
};

}  // namespace vsumm
