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

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "common/instances.h"
#include "vsumm/vsumm.hpp"

namespace vsumm {
namespace {

using testing::Family;

std::shared_ptr<const SimilarityKernel> dense(std::size_t n, std::vector<float> s) {
  return std::make_shared<const SimilarityKernel>(SimilarityKernel::from_dense(n, std::move(s)));
}

// One feature per item, so f is modular with singleton values q.
FeatureBased modular(const std::vector<double>& q) {
  const std::size_t n = q.size();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = q[i];
  return FeatureBased(std::move(m), n, Concave::identity);
}

TEST(OptimizeTest, ModularTopK) {
  FeatureBased f = modular({3, 1, 2});
  const SummaryResult r = greedy_cardinality(f, 2);
  EXPECT_EQ(r.selected, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(r.gains, (std::vector<double>{3, 2}));
  EXPECT_DOUBLE_EQ(r.objective_value, 5.0);
  EXPECT_EQ(r.cost_used, 2.0);
}

TEST(OptimizeTest, TiesGoToLowestId) {
  FeatureBased f = modular({1, 2, 2, 2});
  EXPECT_EQ(greedy_cardinality(f, 2).selected, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(lazy_greedy(f, Cardinality{3}).selected, (std::vector<std::size_t>{1, 2, 3}));
}

TEST(OptimizeTest, CardinalityErrors) {
  FeatureBased f = modular({1, 2});
  EXPECT_THROW(greedy_cardinality(f, 3), InvalidArgument);
  EXPECT_THROW(greedy_cardinality(f, 0), InvalidArgument);
  EXPECT_THROW(lazy_greedy(f, Cardinality{3}), InvalidArgument);
}

TEST(OptimizeTest, FacilityLocationPicksOnePerCluster) {
  SyntheticSpec spec;
  spec.duration_s = 60;
  spec.clusters = 3;
  spec.outliers = 0;
  spec.seed = 12;
  const AnalysisDatabase db = generate_synthetic(spec);
  const GroundSet gs = build_keyframe_groundset(db);
  FacilityLocation f(std::make_shared<const SimilarityKernel>(build_kernel(gs, default_recipe(gs))));
  for (bool lazy : {false, true}) {
    const SummaryResult r = maximize(f, Cardinality{3}, {}, lazy);
    std::set<int> clusters;
    for (std::size_t j : r.selected) clusters.insert(db.frames[gs.origin[j]].cluster);
    EXPECT_EQ(clusters, (std::set<int>{0, 1, 2}));
  }
}

TEST(OptimizeTest, EqualCostKnapsackReducesToCardinality) {
  std::mt19937_64 rng(17);
  for (Family fam : testing::monotone_families()) {
    for (int inst = 0; inst < 5; ++inst) {
      Objective obj = testing::random_objective(fam, 12, rng);
      std::visit(
          [&](auto& f) {
            const std::vector<double> costs(12, 2.5);
            const SummaryResult knap = greedy_knapsack(f, costs, 10.0);
            const SummaryResult card = greedy_cardinality(f, 4);
            EXPECT_EQ(knap.selected, card.selected) << f.name();
            EXPECT_DOUBLE_EQ(knap.cost_used, 10.0);
          },
          obj);
    }
  }
}

TEST(OptimizeTest, KnapsackSingletonBranch) {
  FeatureBased f = modular({10, 9});
  const std::vector<double> costs{10, 1};
  const SummaryResult tight = greedy_knapsack(f, costs, 10.0);
  EXPECT_TRUE(tight.singleton_fallback);
  EXPECT_EQ(tight.selected, (std::vector<std::size_t>{0}));
  EXPECT_DOUBLE_EQ(tight.objective_value, 10.0);
  EXPECT_DOUBLE_EQ(brute_force_opt(f, Knapsack{10.0}, costs).best_value, 10.0);

  const SummaryResult loose = greedy_knapsack(f, costs, 11.0);
  EXPECT_FALSE(loose.singleton_fallback);
  EXPECT_EQ(loose.selected, (std::vector<std::size_t>{1, 0}));
  EXPECT_DOUBLE_EQ(loose.objective_value, 19.0);
  EXPECT_DOUBLE_EQ(brute_force_opt(f, Knapsack{11.0}, costs).best_value, 19.0);

  const SummaryResult lazy = lazy_greedy(f, Knapsack{10.0}, costs);
  EXPECT_EQ(lazy.selected, tight.selected);
  EXPECT_TRUE(lazy.singleton_fallback);
}

TEST(OptimizeTest, KnapsackRespectsBudgetAndBound) {
  std::mt19937_64 rng(23);
  const double bound = 1.0 - 1.0 / std::sqrt(std::exp(1.0));
  for (Family fam : testing::monotone_families()) {
    for (int inst = 0; inst < 10; ++inst) {
      Objective obj = testing::random_objective(fam, 10, rng);
      const auto costs = testing::random_costs(10, rng);
      std::visit(
          [&](auto& f) {
            const SummaryResult r = greedy_knapsack(f, costs, 6.0);
            EXPECT_LE(r.cost_used, 6.0 + 1e-9);
            const BruteForceResult opt = brute_force_opt(f, Knapsack{6.0}, costs);
            EXPECT_GE(r.objective_value, bound * opt.best_value - 1e-9) << f.name();
          },
          obj);
    }
  }
}

TEST(OptimizeTest, KnapsackErrors) {
  FeatureBased f = modular({1, 2});
  const std::vector<double> costs{5, 6};
  EXPECT_THROW(greedy_knapsack(f, costs, 4.0), InvalidArgument);
  EXPECT_THROW(greedy_knapsack(f, costs, 0.0), InvalidArgument);
  EXPECT_THROW(greedy_knapsack(f, std::vector<double>{1.0}, 4.0), InvalidArgument);
  EXPECT_THROW(greedy_knapsack(f, std::vector<double>{1.0, -1.0}, 4.0), InvalidArgument);
}

TEST(OptimizeTest, CoverSelectsMinimalSets) {
  // U_1 = {a, b}, U_2 = {b}, U_3 = {c}.
  SetCover f({{0, 1}, {1}, {2}}, 3);
  const SummaryResult r = greedy_cover(f, 1.0);
  EXPECT_EQ(r.selected, (std::vector<std::size_t>{0, 2}));
  const BruteForceResult opt = brute_force_opt(f, Cover{1.0});
  EXPECT_EQ(opt.best_set, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(lazy_greedy(f, Cover{1.0}).selected, r.selected);
}

TEST(OptimizeTest, FullCoverCoversEveryConcept) {
  std::mt19937_64 rng(31);
  for (int inst = 0; inst < 20; ++inst) {
    const auto concepts = testing::random_concepts(15, 12, rng, 0.15);
    SetCover f(concepts, 12);
    const SummaryResult r = greedy_cover(f, 1.0);
    std::set<std::size_t> all, got;
    for (const auto& list : concepts) all.insert(list.begin(), list.end());
    for (std::size_t j : r.selected) got.insert(concepts[j].begin(), concepts[j].end());
    EXPECT_EQ(got, all);
  }
}

TEST(OptimizeTest, FacilityLocationCoverOnTwoClusters) {
  SyntheticSpec spec;
  spec.duration_s = 40;
  spec.clusters = 2;
  spec.outliers = 0;
  spec.seed = 3;
  const GroundSet gs = build_keyframe_groundset(generate_synthetic(spec));
  FacilityLocation f(std::make_shared<const SimilarityKernel>(build_kernel(gs, default_recipe(gs))));
  const SummaryResult r = greedy_cover(f, 0.9);
  EXPECT_EQ(r.selected.size(), 2u);
}

TEST(OptimizeTest, CoverRejectsDiversityAndBadFraction) {
  std::mt19937_64 rng(2);
  DisparityMin dm(testing::random_kernel(5, rng));
  EXPECT_THROW(greedy_cover(dm, 1.0), InvalidArgument);
  SetCover sc({{0}}, 1);
  EXPECT_THROW(greedy_cover(sc, 0.0), InvalidArgument);
  EXPECT_THROW(greedy_cover(sc, 1.5), InvalidArgument);
}

// Farthest-point traversal computed from the points directly.
std::vector<std::size_t> gonzalez(const std::vector<std::pair<double, double>>& pts, std::size_t k) {
  const std::size_t n = pts.size();
  auto d = [&](std::size_t a, std::size_t b) {
    return std::min(1.0, std::hypot(pts[a].first - pts[b].first, pts[a].second - pts[b].second) / std::sqrt(2.0));
  };
  std::size_t first = 0;
  double best_sum = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += d(i, j);
    if (sum > best_sum) {
      best_sum = sum;
      first = i;
    }
  }
  std::vector<std::size_t> out{first};
  std::vector<double> near(n, std::numeric_limits<double>::infinity());
  while (out.size() < k) {
    for (std::size_t i = 0; i < n; ++i) near[i] = std::min(near[i], d(i, out.back()));
    std::size_t arg = 0;
    double far = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (near[i] > far) {
        far = near[i];
        arg = i;
      }
    }
    out.push_back(arg);
  }
  return out;
}

TEST(OptimizeTest, DiversityGreedyIsFarthestPointTraversal) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int inst = 0; inst < 30; ++inst) {
    std::vector<std::pair<double, double>> pts(40);
    for (auto& p : pts) p = {u(rng), u(rng)};
    DisparityMin f(testing::euclidean_kernel(pts));
    const SummaryResult r = greedy_cardinality(f, 8);
    EXPECT_EQ(r.selected, gonzalez(pts, 8)) << "instance " << inst;
    EXPECT_EQ(lazy_greedy(f, Cardinality{8}).selected, r.selected);
  }
}

TEST(OptimizeTest, DiversityStopsShortOnDuplicates) {
  // Items 0 and 1 are identical, as are 2 and 3.
  DisparityMin f(dense(4, {1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1}));
  const SummaryResult r = greedy_cardinality(f, 4);
  EXPECT_TRUE(r.short_result);
  EXPECT_EQ(r.selected, (std::vector<std::size_t>{0, 2}));
  EXPECT_DOUBLE_EQ(r.objective_value, 1.0);
}

template <class F>
void expect_same_runs(F& f, const Constraint& c, std::span<const double> costs) {
  const SummaryResult naive = maximize(f, c, costs, false, GreedyOptions{true});
  const SummaryResult lazy = maximize(f, c, costs, true, GreedyOptions{true});
  EXPECT_EQ(naive.selected, lazy.selected) << f.name();
  ASSERT_EQ(naive.gains.size(), lazy.gains.size());
  for (std::size_t i = 0; i < naive.gains.size(); ++i) EXPECT_NEAR(naive.gains[i], lazy.gains[i], 1e-9);
  EXPECT_LE(lazy.gain_evaluations, naive.gain_evaluations);
}

TEST(OptimizeTest, LazyMatchesNaiveForEveryConstraint) {
  std::mt19937_64 rng(51);
  for (Family fam : testing::monotone_families()) {
    for (int inst = 0; inst < 10; ++inst) {
      Objective obj = testing::random_objective(fam, 16, rng);
      const auto costs = testing::random_costs(16, rng);
      std::visit(
          [&](auto& f) {
            expect_same_runs(f, Cardinality{6}, {});
            expect_same_runs(f, Knapsack{7.0}, costs);
            expect_same_runs(f, Cover{0.8}, {});
          },
          obj);
    }
  }
}

TEST(OptimizeTest, ModularObjectiveNeverResorts) {
  std::mt19937_64 rng(3);
  for (int inst = 0; inst < 10; ++inst) {
    FeatureBased f(testing::random_features(30, 5, rng), 5, Concave::identity);
    EXPECT_EQ(lazy_greedy(f, Cardinality{10}).resort_count, 0u);
  }
}

TEST(OptimizeTest, GainsNonIncreasingAndValueRecomputed) {
  std::mt19937_64 rng(61);
  for (Family fam : testing::monotone_families()) {
    Objective obj = testing::random_objective(fam, 20, rng);
    std::visit(
        [&](auto& f) {
          const SummaryResult r = lazy_greedy(f, Cardinality{10}, {}, GreedyOptions{true});
          for (std::size_t i = 1; i < r.gains.size(); ++i) EXPECT_LE(r.gains[i], r.gains[i - 1] + 1e-9);
          EXPECT_NEAR(r.objective_value, f.evaluate(r.selected), 1e-12);
          double sum = 0.0;
          for (double g : r.gains) sum += g;
          EXPECT_NEAR(sum, r.objective_value, 1e-9 * std::max(1.0, r.objective_value));
        },
        obj);
  }
}

// Deliberately wrong memoization: the gain ignores the current selection.
class Forgetful {
 public:
  static constexpr bool kMonotoneSubmodular = true;
  explicit Forgetful(SetCover inner) : inner_(std::move(inner)) {}
  std::string name() const { return "forgetful"; }
  std::size_t size() const { return inner_.size(); }
  double evaluate(std::span<const std::size_t> xs) const { return inner_.evaluate(xs); }
  double gain(std::size_t j) const {
    const std::vector<std::size_t> one{j};
    return inner_.evaluate(one);
  }
  double value() const { return inner_.value(); }
  std::span<const std::size_t> selected() const { return inner_.selected(); }
  bool contains(std::size_t j) const { return inner_.contains(j); }
  void commit(std::size_t j) { inner_.commit(j); }
  void reset() { inner_.reset(); }

 private:
  SetCover inner_;
};

TEST(OptimizeTest, VerifyModeCatchesBadMemoization) {
  Forgetful f(SetCover({{0, 1}, {0, 1}, {2}}, 3));
  EXPECT_THROW(greedy_cardinality(f, 2, GreedyOptions{true}), MemoizationMismatch);
  EXPECT_NO_THROW(greedy_cardinality(f, 2));
}

TEST(OptimizeTest, AffineKernelChangeKeepsOrder) {
  std::mt19937_64 rng(71);
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t n = 25;
    const auto k = testing::random_kernel(n, rng);
    std::vector<float> scaled(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) scaled[i * n + j] = static_cast<float>(0.5 * (*k)(i, j) + 0.25);
    }
    FacilityLocation a(k), b(dense(n, std::move(scaled)));
    EXPECT_EQ(greedy_cardinality(a, 8).selected, greedy_cardinality(b, 8).selected);
  }
}

TEST(OptimizeTest, BruteForceExamples) {
  std::mt19937_64 rng(81);
  FacilityLocation f(testing::random_kernel(6, rng));
  const BruteForceResult all = brute_force_opt(f, Cardinality{6});
  EXPECT_EQ(all.best_set, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5}));
  const std::vector<double> costs(6, 3.0);
  const BruteForceResult none = brute_force_opt(f, Knapsack{2.0}, costs);
  EXPECT_TRUE(none.best_set.empty());
  EXPECT_EQ(none.best_value, 0.0);
  FacilityLocation big(testing::random_kernel(21, rng));
  EXPECT_THROW(brute_force_opt(big, Cardinality{2}), InvalidArgument);
}

TEST(OptimizeTest, GreedyWithinBoundOfOptimum) {
  std::mt19937_64 rng(91);
  const double bound = 1.0 - 1.0 / std::exp(1.0);
  for (Family fam : testing::monotone_families()) {
    for (int inst = 0; inst < 10; ++inst) {
      Objective obj = testing::random_objective(fam, 10, rng);
      std::visit(
          [&](auto& f) {
            for (std::size_t k = 1; k <= 4; ++k) {
              const double opt = brute_force_opt(f, Cardinality{k}).best_value;
              EXPECT_GE(greedy_cardinality(f, k).objective_value, bound * opt - 1e-9);
            }
          },
          obj);
    }
  }
}

// Report only: the cover run at the knapsack's achieved fraction.
TEST(OptimizeTest, CoverKnapsackDualityReport) {
  std::mt19937_64 rng(101);
  int cheaper_or_equal = 0, total = 0;
  for (int inst = 0; inst < 20; ++inst) {
    FacilityLocation f(testing::random_kernel(14, rng));
    const auto costs = testing::random_costs(14, rng);
    const SummaryResult knap = greedy_knapsack(f, costs, 8.0);
    std::vector<std::size_t> all(14);
    std::iota(all.begin(), all.end(), 0);
    const double c = knap.objective_value / f.evaluate(all);
    const SummaryResult cover = greedy_cover(f, c, costs);
    EXPECT_GE(cover.objective_value, c * f.evaluate(all) * (1 - 1e-9));
    cheaper_or_equal += cover.cost_used <= knap.cost_used + 1e-9;
    ++total;
  }
  RecordProperty("cover_cost_within_knapsack", std::to_string(cheaper_or_equal) + "/" + std::to_string(total));
}

TEST(OptimizeTest, ResortsPerStepBelowGroundSetSize) {
  SyntheticSpec spec;
  spec.duration_s = 600;
  spec.clusters = 10;
  spec.seed = 5;
  const GroundSet gs = build_keyframe_groundset(generate_synthetic(spec));
  FacilityLocation f(std::make_shared<const SimilarityKernel>(build_kernel(gs, default_recipe(gs))));
  const SummaryResult r = lazy_greedy(f, Cardinality{30});
  EXPECT_LT(r.resorts_per_step(), static_cast<double>(gs.size()));
  RecordProperty("resorts_per_step", std::to_string(r.resorts_per_step()));
}

}  // namespace
}  // namespace vsumm
