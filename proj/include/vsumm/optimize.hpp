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

// Greedy maximization under cardinality, knapsack and cover constraints,
// with naive and lazy (priority queue) candidate selection, plus an
// exhaustive oracle for small ground sets.
//
// Selection rule, shared by every variant so lazy and naive runs produce the
// same sequence: among available candidates with key >= max_key - 1e-12,
// take the smallest item id. The key is the memoized gain (cardinality,
// cover), gain / cost (knapsack), or DisparityMin::priority for the
// non-submodular diversity objective.

#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vsumm/error.hpp"
#include "vsumm/functions/set_function.hpp"

namespace vsumm {

struct Cardinality {
  std::size_t k = 1;

  bool operator==(const Cardinality&) const = default;
};

struct Knapsack {
  double budget = 0.0;  // seconds

  bool operator==(const Knapsack&) const = default;
};

struct Cover {
  double fraction = 1.0;  // reach f(X) >= fraction * f(V)

  bool operator==(const Cover&) const = default;
};

using Constraint = std::variant<Cardinality, Knapsack, Cover>;

struct GreedyOptions {
  // Check every memoized gain against f(X + j) - f(X) from scratch, and the
  // non-increasing gain sequence of cardinality runs on submodular
  // objectives. Slow; meant for tests.
  bool verify = false;
};

struct SummaryResult {
  std::vector<std::size_t> selected;  // selection order
  std::vector<double> gains;          // f(j | X) at each step
  double objective_value = 0.0;       // f(selected), recomputed from scratch
  double cost_used = 0.0;
  std::size_t resort_count = 0;       // lazy runs: refreshes that lowered a bound
  std::size_t gain_evaluations = 0;   // candidate key computations
  bool short_result = false;          // diversity run stopped early
  bool singleton_fallback = false;    // knapsack kept the best singleton
  bool lazy = false;
  double wall_time_s = 0.0;

  // Average number of re-sorts per selection step.
  double resorts_per_step() const {
    return selected.empty() ? 0.0 : static_cast<double>(resort_count) / static_cast<double>(selected.size());
  }
};

struct BruteForceResult {
  std::vector<std::size_t> best_set;
  double best_value = 0.0;
  double cost = 0.0;
};

inline constexpr double kTieTolerance = 1e-12;
inline constexpr double kMemoTolerance = 1e-9;
inline constexpr std::size_t kBruteForceLimit = 20;

namespace detail {

template <class F>
concept HasPriority = requires(const F& f, std::size_t j) {
  { f.priority(j) } -> std::convertible_to<double>;
};

struct Pick {
  std::size_t id;
  double key;
};

// Relative slack for comparing objective values of scale |v|.
inline double slack(double v, double rel) { return rel * std::max(1.0, std::abs(v)); }

template <SetFunction F>
void verify_gain(const F& f, std::size_t j, double memo) {
  std::vector<std::size_t> xs(f.selected().begin(), f.selected().end());
  const double before = f.evaluate(xs);
  xs.push_back(j);
  const double after = f.evaluate(xs);
  const double naive = after - before;
  if (std::abs(memo - naive) > slack(after, kMemoTolerance)) {
    throw MemoizationMismatch(f.name() + ": memoized gain " + std::to_string(memo) + " for item " +
                              std::to_string(j) + " differs from naive " + std::to_string(naive));
  }
}

template <SetFunction F>
double checked_gain(const F& f, std::size_t j, const GreedyOptions& opts) {
  const double g = f.gain(j);
  if (opts.verify) verify_gain(f, j, g);
  return g;
}

// Recomputes every available candidate's key each step.
class NaiveSelector {
 public:
  static constexpr bool kLazy = false;

  template <class Key, class Available>
  std::optional<Pick> next(std::size_t /*step*/, std::size_t n, Key&& key, Available&& available) {
    candidates_.clear();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (!available(j)) continue;
      const double k = key(j);
      ++evaluations;
      candidates_.push_back({j, k});
      best = std::max(best, k);
    }
    for (const Pick& c : candidates_) {
      if (c.key >= best - kTieTolerance) return c;
    }
    return std::nullopt;
  }

  std::size_t evaluations = 0;
  std::size_t resorts = 0;

 private:
  std::vector<Pick> candidates_;
};

// Priority queue of possibly stale upper bounds. A popped entry is accepted
// once its key has been refreshed in the current step and it still heads
// the queue; entries within the tie tolerance of the head are refreshed too
// so ties resolve exactly as in NaiveSelector. Once a step has refreshed a
// quarter of the queue, the remaining stale entries are refreshed in place
// and the heap is rebuilt in linear time.
class LazySelector {
 public:
  static constexpr bool kLazy = true;

  template <class Key, class Available>
  std::optional<Pick> next(std::size_t step, std::size_t n, Key&& key, Available&& available) {
    if (!initialized_) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!available(j)) continue;
        heap_.push_back({key(j), j, step});
        ++evaluations;
      }
      std::make_heap(heap_.begin(), heap_.end(), lower);
      initialized_ = true;
    }
    std::size_t refreshed = 0;
    auto refresh = [&](Entry& e) {
      const double k = key(e.id);
      ++evaluations;
      ++refreshed;
      if (k < e.key - kTieTolerance) ++resorts;
      e.key = k;
      e.stamp = step;
    };
    while (!heap_.empty()) {
      if (refreshed * 4 >= heap_.size() && heap_.front().stamp != step) {
        std::erase_if(heap_, [&](const Entry& e) { return !available(e.id); });
        for (Entry& e : heap_) {
          if (e.stamp != step) refresh(e);
        }
        std::make_heap(heap_.begin(), heap_.end(), lower);
        continue;
      }
      Entry top = pop();
      if (!available(top.id)) continue;
      if (top.stamp != step) {
        refresh(top);
        push(top);
        continue;
      }
      pool_.assign(1, top);
      double best = top.key;
      while (!heap_.empty() && heap_.front().key >= best - kTieTolerance) {
        Entry e = pop();
        if (!available(e.id)) continue;
        if (e.stamp != step) refresh(e);
        best = std::max(best, e.key);
        pool_.push_back(e);
      }
      std::size_t chosen = pool_.size();
      for (std::size_t p = 0; p < pool_.size(); ++p) {
        if (pool_[p].key >= best - kTieTolerance && (chosen == pool_.size() || pool_[p].id < pool_[chosen].id)) {
          chosen = p;
        }
      }
      for (std::size_t p = 0; p < pool_.size(); ++p) {
        if (p != chosen) push(pool_[p]);
      }
      return Pick{pool_[chosen].id, pool_[chosen].key};
    }
    return std::nullopt;
  }

  std::size_t evaluations = 0;
  std::size_t resorts = 0;

 private:
  struct Entry {
    double key;
    std::size_t id;
    std::size_t stamp;
  };

  // Heap order: larger key first, then smaller id.
  static bool lower(const Entry& a, const Entry& b) {
    return a.key != b.key ? a.key < b.key : a.id > b.id;
  }

  Entry pop() {
    std::pop_heap(heap_.begin(), heap_.end(), lower);
    Entry e = heap_.back();
    heap_.pop_back();
    return e;
  }

  void push(const Entry& e) {
    heap_.push_back(e);
    std::push_heap(heap_.begin(), heap_.end(), lower);
  }

  bool initialized_ = false;
  std::vector<Entry> heap_;
  std::vector<Entry> pool_;
};

template <SetFunction F>
double selection_key(const F& f, std::size_t j, const GreedyOptions& opts) {
  if constexpr (HasPriority<F>) {
    return f.priority(j);
  } else {
    return checked_gain(f, j, opts);
  }
}

template <SetFunction F>
void check_costs(const F& f, std::span<const double> costs) {
  if (costs.empty()) return;
  if (costs.size() != f.size()) throw InvalidArgument("cost vector size does not match the ground set");
  for (double c : costs) {
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("item costs must be positive");
  }
}

inline double cost_of(std::span<const double> costs, std::size_t j) { return costs.empty() ? 1.0 : costs[j]; }

// Records a committed pick; for diversity the trace gain is computed here
// because the selection key is a priority, not a gain.
template <SetFunction F>
void commit_pick(F& f, const Pick& pick, std::optional<double> known_gain, std::span<const double> costs,
                 const GreedyOptions& opts, SummaryResult& r) {
  const double g = known_gain ? *known_gain : checked_gain(f, pick.id, opts);
  f.commit(pick.id);
  r.selected.push_back(pick.id);
  r.gains.push_back(g);
  r.cost_used += cost_of(costs, pick.id);
}

template <SetFunction F, class Selector>
void run_cardinality(F& f, std::size_t k, std::span<const double> costs, Selector& sel,
                     const GreedyOptions& opts, SummaryResult& r) {
  const std::size_t n = f.size();
  if (k == 0) throw InvalidArgument("cardinality constraint needs k >= 1");
  if (k > n) {
    throw InvalidArgument("k=" + std::to_string(k) + " exceeds the ground set size " + std::to_string(n));
  }
  auto key = [&](std::size_t j) { return selection_key(f, j, opts); };
  auto available = [&](std::size_t j) { return !f.contains(j); };
  for (std::size_t step = 0; step < k; ++step) {
    const auto pick = sel.next(step, n, key, available);
    if (!pick) break;
    if constexpr (HasPriority<F>) {
      // Every remaining item duplicates a selected one.
      if (step > 0 && pick->key <= 0.0) {
        r.short_result = true;
        break;
      }
      commit_pick(f, *pick, std::nullopt, costs, opts, r);
    } else {
      if (opts.verify && F::kMonotoneSubmodular && !r.gains.empty() &&
          pick->key > r.gains.back() + detail::slack(r.gains.back(), kMemoTolerance)) {
        throw std::logic_error(f.name() + ": greedy gains increased; objective is not submodular");
      }
      commit_pick(f, *pick, pick->key, costs, opts, r);
    }
  }
}

template <SetFunction F, class Selector>
void run_knapsack(F& f, double budget, std::span<const double> costs, Selector& sel, const GreedyOptions& opts,
                  SummaryResult& r) {
  const std::size_t n = f.size();
  if (!(budget > 0.0) || !std::isfinite(budget)) throw InvalidArgument("knapsack budget must be positive");
  constexpr double kBudgetSlack = 1e-9;
  bool any_fits = false;
  for (std::size_t j = 0; j < n; ++j) any_fits = any_fits || cost_of(costs, j) <= budget + kBudgetSlack;
  if (!any_fits) throw InvalidArgument("no item fits the knapsack budget");

  // f({j}) for every feasible singleton, for the final comparison.
  std::optional<Pick> best_single;
  if constexpr (F::kMonotoneSubmodular) {
    for (std::size_t j = 0; j < n; ++j) {
      if (cost_of(costs, j) > budget + kBudgetSlack) continue;
      const double v = checked_gain(f, j, opts);
      ++r.gain_evaluations;
      if (!best_single || v > best_single->key + kTieTolerance) best_single = Pick{j, v};
    }
  }

  auto key = [&](std::size_t j) {
    if constexpr (HasPriority<F>) {
      return f.priority(j);
    } else {
      return checked_gain(f, j, opts) / cost_of(costs, j);
    }
  };
  auto available = [&](std::size_t j) {
    return !f.contains(j) && cost_of(costs, j) <= budget - r.cost_used + kBudgetSlack;
  };
  for (std::size_t step = 0;; ++step) {
    const auto pick = sel.next(step, n, key, available);
    if (!pick) break;
    if constexpr (HasPriority<F>) {
      if (step > 0 && pick->key <= 0.0) {
        r.short_result = true;
        break;
      }
    }
    commit_pick(f, *pick, std::nullopt, costs, opts, r);
  }

  if (best_single && best_single->key > f.value() + slack(f.value(), kTieTolerance)) {
    f.reset();
    f.commit(best_single->id);
    r.selected.assign(1, best_single->id);
    r.gains.assign(1, best_single->key);
    r.cost_used = cost_of(costs, best_single->id);
    r.singleton_fallback = true;
  }
}

template <SetFunction F, class Selector>
void run_cover(F& f, double fraction, std::span<const double> costs, Selector& sel, const GreedyOptions& opts,
               SummaryResult& r) {
  if constexpr (!F::kMonotoneSubmodular) {
    throw InvalidArgument(f.name() + " is not monotone; the cover constraint is unsupported");
  } else {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidArgument("cover fraction must lie in (0, 1]");
    const std::size_t n = f.size();
    std::vector<std::size_t> all(n);
    for (std::size_t j = 0; j < n; ++j) all[j] = j;
    const double target = fraction * f.evaluate(all);
    const double tol = kMemoTolerance * std::abs(target);
    auto key = [&](std::size_t j) { return checked_gain(f, j, opts); };
    auto available = [&](std::size_t j) { return !f.contains(j); };
    for (std::size_t step = 0; f.value() < target - tol; ++step) {
      const auto pick = sel.next(step, n, key, available);
      if (!pick) break;
      commit_pick(f, *pick, pick->key, costs, opts, r);
    }
  }
}

template <SetFunction F, class Selector>
SummaryResult run(F& f, const Constraint& constraint, std::span<const double> costs, const GreedyOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  check_costs(f, costs);
  f.reset();
  Selector sel;
  SummaryResult r;
  r.lazy = Selector::kLazy;
  std::visit(
      [&](const auto& c) {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, Cardinality>) {
          run_cardinality(f, c.k, costs, sel, opts, r);
        } else if constexpr (std::is_same_v<C, Knapsack>) {
          run_knapsack(f, c.budget, costs, sel, opts, r);
        } else {
          run_cover(f, c.fraction, costs, sel, opts, r);
        }
      },
      constraint);
  r.gain_evaluations += sel.evaluations;
  r.resort_count = sel.resorts;
  r.objective_value = f.evaluate(r.selected);
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace detail

// Problem 1 by plain greedy: k rounds of argmax_j f(j | X).
template <SetFunction F>
SummaryResult greedy_cardinality(F& f, std::size_t k, const GreedyOptions& opts = {}) {
  return detail::run<F, detail::NaiveSelector>(f, Cardinality{k}, {}, opts);
}

// Problem 2 by cost-scaled greedy, compared against the best feasible
// singleton.
template <SetFunction F>
SummaryResult greedy_knapsack(F& f, std::span<const double> costs, double budget, const GreedyOptions& opts = {}) {
  if (costs.size() != f.size()) throw InvalidArgument("knapsack needs one cost per item");
  return detail::run<F, detail::NaiveSelector>(f, Knapsack{budget}, costs, opts);
}

// Problem 3: greedy until f(X) >= fraction * f(V).
template <SetFunction F>
SummaryResult greedy_cover(F& f, double fraction, std::span<const double> costs = {}, const GreedyOptions& opts = {}) {
  return detail::run<F, detail::NaiveSelector>(f, Cover{fraction}, costs, opts);
}

// Lazy variant of any of the above. Produces the same selection sequence.
template <SetFunction F>
SummaryResult lazy_greedy(F& f, const Constraint& constraint, std::span<const double> costs = {},
                          const GreedyOptions& opts = {}) {
  if (std::holds_alternative<Knapsack>(constraint) && costs.size() != f.size()) {
    throw InvalidArgument("knapsack needs one cost per item");
  }
  return detail::run<F, detail::LazySelector>(f, constraint, costs, opts);
}

// Dispatches to the naive or lazy selector.
template <SetFunction F>
SummaryResult maximize(F& f, const Constraint& constraint, std::span<const double> costs, bool lazy,
                       const GreedyOptions& opts = {}) {
  if (lazy) return lazy_greedy(f, constraint, costs, opts);
  if (std::holds_alternative<Knapsack>(constraint) && costs.size() != f.size()) {
    throw InvalidArgument("knapsack needs one cost per item");
  }
  return detail::run<F, detail::NaiveSelector>(f, constraint, costs, opts);
}

// Exhaustive optimum for |V| <= 20. Cardinality: max f over |X| = k.
// Knapsack: max f over cost(X) <= budget (the empty set is feasible).
// Cover: min cost subject to f(X) >= fraction * f(V), ties to larger f.
template <SetFunction F>
BruteForceResult brute_force_opt(const F& f, const Constraint& constraint, std::span<const double> costs = {}) {
  const std::size_t n = f.size();
  if (n > kBruteForceLimit) {
    throw InvalidArgument("brute force supports at most " + std::to_string(kBruteForceLimit) + " items");
  }
  detail::check_costs(f, costs);
  std::vector<std::size_t> xs;
  auto members = [&](std::uint32_t mask) {
    xs.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (1u << j)) xs.push_back(j);
    }
    return std::span<const std::size_t>(xs);
  };
  auto cost_of_set = [&](std::span<const std::size_t> set) {
    double c = 0.0;
    for (std::size_t j : set) c += detail::cost_of(costs, j);
    return c;
  };
  std::optional<BruteForceResult> best;
  const std::uint32_t limit = 1u << n;

  if (const auto* card = std::get_if<Cardinality>(&constraint)) {
    if (card->k > n) throw InvalidArgument("k exceeds the ground set size");
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != card->k) continue;
      const auto set = members(mask);
      const double v = f.evaluate(set);
      if (!best || v > best->best_value) best = BruteForceResult{{set.begin(), set.end()}, v, cost_of_set(set)};
    }
  } else if (const auto* knap = std::get_if<Knapsack>(&constraint)) {
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
      const auto set = members(mask);
      const double c = cost_of_set(set);
      if (c > knap->budget + 1e-9) continue;
      const double v = f.evaluate(set);
      if (!best || v > best->best_value) best = BruteForceResult{{set.begin(), set.end()}, v, c};
    }
  } else {
    const double fraction = std::get<Cover>(constraint).fraction;
    std::vector<std::size_t> all(n);
    for (std::size_t j = 0; j < n; ++j) all[j] = j;
    const double target = fraction * f.evaluate(all);
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
      const auto set = members(mask);
      const double v = f.evaluate(set);
      if (v < target - kMemoTolerance * std::abs(target)) continue;
      const double c = cost_of_set(set);
      if (!best || c < best->cost - 1e-12 || (std::abs(c - best->cost) <= 1e-12 && v > best->best_value)) {
        best = BruteForceResult{{set.begin(), set.end()}, v, c};
      }
    }
  }
  return best.value_or(BruteForceResult{});
}

}  // namespace vsumm
