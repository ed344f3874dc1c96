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

#include <gtest/gtest.h>

#include "vsumm/ground_set.hpp"
#include "vsumm/synthetic.hpp"

namespace vsumm {
namespace {

AnalysisDatabase video(double duration, double fps = 1.0, std::uint64_t seed = 0) {
  SyntheticSpec spec;
  spec.duration_s = duration;
  spec.fps = fps;
  spec.seed = seed;
  spec.objects = 5;
  spec.faces = 3;
  return generate_synthetic(spec);
}

TEST(GroundSetTest, KeyframesAreOnePerFrame) {
  EXPECT_EQ(build_keyframe_groundset(video(60)).size(), 60u);
  EXPECT_EQ(build_keyframe_groundset(video(81)).size(), 81u);
  EXPECT_EQ(build_keyframe_groundset(video(30, 2.0)).size(), 60u);
  const GroundSet one = build_keyframe_groundset(video(1));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.items[0].cost, 1.0);
}

TEST(GroundSetTest, EmptyDatabaseRejected) {
  AnalysisDatabase db;
  db.video = {1.0, 1.0};
  EXPECT_THROW(build_keyframe_groundset(db), InvalidArgument);
}

TEST(GroundSetTest, FixedSnippetsOfTwoSeconds) {
  const GroundSet gs = build_snippet_groundset(video(120), SnippetMode::parse("fixed:2"));
  ASSERT_EQ(gs.size(), 60u);
  for (const Item& item : gs.items) {
    EXPECT_DOUBLE_EQ(item.cost, 2.0);
    EXPECT_EQ(item.source_frames.size(), 2u);
  }
}

TEST(GroundSetTest, LastFixedSnippetIsKeptShort) {
  const GroundSet gs = build_snippet_groundset(video(61), SnippetMode::parse("fixed:2"));
  ASSERT_EQ(gs.size(), 31u);
  EXPECT_DOUBLE_EQ(gs.items.back().cost, 1.0);
  EXPECT_NEAR(gs.total_cost(), 61.0, 1e-6);
}

TEST(GroundSetTest, SnippetOfWholeVideo) {
  const GroundSet gs = build_snippet_groundset(video(30), SnippetMode::parse("fixed:30"));
  ASSERT_EQ(gs.size(), 1u);
  EXPECT_EQ(gs.items[0].time_range, (TimeRange{0.0, 30.0}));
  EXPECT_EQ(gs.items[0].source_frames.size(), 30u);
}

TEST(GroundSetTest, FixedSnippetCountIsCeiling) {
  for (double T : {7.0, 10.0, 33.0, 120.0}) {
    for (double S : {0.5, 1.0, 1.5, 2.0, 3.0, 7.0}) {
      if (S > T) continue;
      const GroundSet gs = build_snippet_groundset(video(T), {SnippetMode::Kind::fixed, S});
      EXPECT_EQ(gs.size(), static_cast<std::size_t>(std::ceil(T / S))) << T << "/" << S;
      EXPECT_NEAR(gs.total_cost(), T, 1e-6);
    }
  }
}

TEST(GroundSetTest, ShotBoundariesDelimitSnippets) {
  AnalysisDatabase db = video(60);
  db.shots = std::vector<double>{10, 50};
  const GroundSet gs = build_snippet_groundset(db, SnippetMode::parse("shots"));
  ASSERT_EQ(gs.size(), 3u);
  EXPECT_DOUBLE_EQ(gs.items[0].cost, 10.0);
  EXPECT_DOUBLE_EQ(gs.items[1].cost, 40.0);
  EXPECT_DOUBLE_EQ(gs.items[2].cost, 10.0);
  EXPECT_EQ(gs.items[1].source_frames.front(), 10u);
  EXPECT_EQ(gs.items[1].source_frames.back(), 49u);
}

TEST(GroundSetTest, SnippetsPartitionTheVideo) {
  AnalysisDatabase db = video(47, 1.0, 3);
  for (const char* mode : {"fixed:4", "shots", "subtitles"}) {
    const GroundSet gs = build_snippet_groundset(db, SnippetMode::parse(mode));
    EXPECT_NEAR(gs.total_cost(), 47.0, 1e-6) << mode;
    EXPECT_DOUBLE_EQ(gs.items.front().time_range.start_s, 0.0);
    EXPECT_DOUBLE_EQ(gs.items.back().time_range.end_s, 47.0);
    for (std::size_t i = 0; i < gs.size(); ++i) {
      EXPECT_GT(gs.items[i].time_range.end_s, gs.items[i].time_range.start_s);
      EXPECT_DOUBLE_EQ(gs.items[i].cost, gs.items[i].time_range.length());
      if (i > 0) EXPECT_DOUBLE_EQ(gs.items[i].time_range.start_s, gs.items[i - 1].time_range.end_s);
    }
  }
}

TEST(GroundSetTest, MissingBoundariesRejected) {
  AnalysisDatabase db = video(20);
  db.subtitles.reset();
  EXPECT_THROW(build_snippet_groundset(db, SnippetMode::parse("subtitles")), InvalidArgument);
  EXPECT_THROW(build_snippet_groundset(db, SnippetMode::parse("fixed:21")), InvalidArgument);
}

TEST(GroundSetTest, SnippetModeParsing) {
  EXPECT_EQ(SnippetMode::parse("fixed:2.5").seconds, 2.5);
  EXPECT_EQ(SnippetMode::parse("fixed:2").to_string(), "fixed:2");
  EXPECT_EQ(SnippetMode::parse("shots").kind, SnippetMode::Kind::shots);
  EXPECT_THROW(SnippetMode::parse("fixed:"), InvalidArgument);
  EXPECT_THROW(SnippetMode::parse("fixed:-1"), InvalidArgument);
  EXPECT_THROW(SnippetMode::parse("scenes"), InvalidArgument);
}

TEST(GroundSetTest, SnippetViewPoolsFrames) {
  const AnalysisDatabase db = video(10);
  const GroundSet gs = build_snippet_groundset(db, SnippetMode::parse("fixed:5"));
  const ItemView& v = gs.views[0];
  // Mean of the member vectors, renormalized.
  std::vector<double> mean(db.frames[0].features.at("scene").size(), 0.0);
  for (std::size_t f = 0; f < 5; ++f) {
    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += db.frames[f].features.at("scene")[d];
  }
  double norm = 0.0;
  for (double x : mean) norm += x * x;
  norm = std::sqrt(norm);
  for (std::size_t d = 0; d < mean.size(); ++d) EXPECT_NEAR(v.features.at("scene")[d], mean[d] / norm, 1e-12);
  // Max-pooled label probabilities.
  for (const LabelScore& l : v.labels.at("object")) {
    double best = 0.0;
    for (std::size_t f = 0; f < 5; ++f) {
      for (const LabelScore& m : db.frames[f].labels.at("object")) {
        if (m.id == l.id) best = std::max(best, m.p);
      }
    }
    EXPECT_DOUBLE_EQ(l.p, best);
  }
  double hist_sum = 0.0;
  for (double h : v.hist) hist_sum += h;
  EXPECT_NEAR(hist_sum, 1.0, 1e-9);
}

TEST(GroundSetTest, EntityGroundSet) {
  const AnalysisDatabase db = video(30);
  const GroundSet objects = build_entity_groundset(db, EntityKind::object);
  EXPECT_EQ(objects.size(), 5u);
  EXPECT_EQ(build_entity_groundset(db, EntityKind::face).size(), 3u);
  for (const Item& item : objects.items) {
    ASSERT_TRUE(item.entity_ref.has_value());
    EXPECT_EQ(db.entities[*item.entity_ref].kind, EntityKind::object);
    EXPECT_EQ(item.cost, 1.0);
  }
  EXPECT_THROW(build_entity_groundset(db, EntityKind::human), InvalidArgument);
}

TEST(GroundSetTest, EightyTwoFaces) {
  SyntheticSpec spec;
  spec.faces = 82;
  EXPECT_EQ(build_entity_groundset(generate_synthetic(spec), EntityKind::face).size(), 82u);
}

TEST(GroundSetTest, TimeWindowKeepsOverlappingItems) {
  const GroundSet gs = build_keyframe_groundset(video(60));
  const GroundSet w = filter_by_time(gs, 10.0, 20.0);
  ASSERT_EQ(w.size(), 10u);
  EXPECT_EQ(w.origin.front(), 10u);
  EXPECT_EQ(w.items.front().id, 0u);
  EXPECT_THROW(filter_by_time(gs, 100.0, 200.0), EmptyQueryResult);
}

}  // namespace
}  // namespace vsumm
