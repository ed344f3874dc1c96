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

#include <set>

#include <gtest/gtest.h>

#include "vsumm/query.hpp"
#include "vsumm/synthetic.hpp"

namespace vsumm {
namespace {

std::set<std::size_t> origins(const GroundSet& gs) { return {gs.origin.begin(), gs.origin.end()}; }

AnalysisDatabase eight_clusters() {
  SyntheticSpec spec;
  spec.duration_s = 80;
  spec.clusters = 8;
  spec.segments_per_cluster = 2;
  spec.objects = 10;
  spec.humans = 4;
  spec.seed = 21;
  return generate_synthetic(spec);
}

TEST(QueryTest, ParsesGrammar) {
  const Query q = parse_query("object:3>=0.6 & color:1 | scene:7");
  ASSERT_EQ(q.clauses.size(), 2u);
  ASSERT_EQ(q.clauses[0].size(), 2u);
  EXPECT_EQ(q.clauses[0][0], (QueryTerm{"object", 3, 0.6}));
  EXPECT_EQ(q.clauses[0][1], (QueryTerm{"color", 1, 0.5}));
  EXPECT_EQ(q.clauses[1][0], (QueryTerm{"scene", 7, 0.5}));
}

TEST(QueryTest, ResolvesNamesThroughVocabularies) {
  const AnalysisDatabase db = eight_clusters();
  const Query q = parse_query("object:person>=0.6 & color:red | scene:scene_4", &db);
  EXPECT_EQ(q.clauses[0][0].label, 0);
  EXPECT_EQ(q.clauses[0][1].label, 0);
  EXPECT_EQ(q.clauses[1][0].label, 4);
  EXPECT_THROW(parse_query("object:unicorn", &db), InvalidArgument);
  EXPECT_THROW(parse_query("object:person"), InvalidArgument);
}

TEST(QueryTest, RejectsMalformedTerms) {
  for (const char* bad : {"", "scene", ":3", "scene:", "scene:3>=", "scene:3>=1.5", "scene:3>=-0.1",
                          "scene:3 & ", "scene:3>=x"}) {
    EXPECT_THROW(parse_query(bad), InvalidArgument) << bad;
  }
}

TEST(QueryTest, ToStringRoundTrips) {
  const Query q = parse_query("object:3>=0.65 & color:1 | scene:7>=0.1");
  EXPECT_EQ(parse_query(to_string(q)), q);
}

// Frames of cluster c carry scene label c at p >= 0.6; distractors stay
// at or below 0.3.
TEST(QueryTest, FilterMatchesGeneratorGroundTruth) {
  const AnalysisDatabase db = eight_clusters();
  const GroundSet gs = build_keyframe_groundset(db);
  for (int c = 0; c < 8; ++c) {
    const GroundSet v = filter_by_query(gs, db, parse_query("scene:" + std::to_string(c)));
    std::set<std::size_t> expected;
    for (std::size_t i = 0; i < db.frames.size(); ++i) {
      if (db.frames[i].cluster == c) expected.insert(i);
    }
    EXPECT_EQ(origins(v), expected) << "cluster " << c;
  }
}

TEST(QueryTest, MatchingEverythingKeepsGroundSet) {
  const AnalysisDatabase db = eight_clusters();
  const GroundSet gs = build_keyframe_groundset(db);
  const GroundSet v = filter_by_query(gs, db, parse_query("scene:0>=0"));
  // Threshold 0 still requires the label to be listed.
  std::string all;
  for (int c = 0; c < 8; ++c) all += (c ? " | " : "") + std::string("scene:") + std::to_string(c);
  EXPECT_EQ(filter_by_query(gs, db, parse_query(all)).size(), gs.size());
  EXPECT_LE(v.size(), gs.size());
}

TEST(QueryTest, IdempotentAndUnion) {
  const AnalysisDatabase db = eight_clusters();
  const GroundSet gs = build_keyframe_groundset(db);
  const Query q1 = parse_query("scene:1 & color:1");
  const Query q2 = parse_query("object:5>=0.7");
  const GroundSet a = filter_by_query(gs, db, q1);
  const GroundSet again = filter_by_query(a, db, q1);
  EXPECT_EQ(origins(again), origins(a));
  const GroundSet b = filter_by_query(gs, db, q2);
  std::set<std::size_t> both = origins(a);
  const auto ob = origins(b);
  both.insert(ob.begin(), ob.end());
  EXPECT_EQ(origins(filter_by_query(gs, db, q1 | q2)), both);
}

TEST(QueryTest, EmptyResultSignalled) {
  const AnalysisDatabase db = eight_clusters();
  EXPECT_THROW(filter_by_query(build_keyframe_groundset(db), db, parse_query("scene:15")), EmptyQueryResult);
}

TEST(QueryTest, SnippetMatchesAnySourceFrame) {
  const AnalysisDatabase db = eight_clusters();
  const GroundSet gs = build_snippet_groundset(db, SnippetMode::parse("fixed:3"));
  const GroundSet v = filter_by_query(gs, db, parse_query("scene:2"));
  for (std::size_t i = 0; i < gs.size(); ++i) {
    bool any = false;
    for (std::size_t f : gs.items[i].source_frames) any = any || db.frames[f].cluster == 2;
    EXPECT_EQ(origins(v).count(i) == 1, any) << i;
  }
}

TEST(QueryTest, EntitiesUseTheirOwnLabels) {
  const AnalysisDatabase db = eight_clusters();
  const GroundSet humans = build_entity_groundset(db, EntityKind::human);
  EXPECT_EQ(filter_by_query(humans, db, parse_query("object:person", &db)).size(), humans.size());
  const GroundSet objects = build_entity_groundset(db, EntityKind::object);
  const int cls = db.entities[*objects.items[0].entity_ref].labels.at("object")[0].id;
  const GroundSet v = filter_by_query(objects, db, parse_query("object:" + std::to_string(cls)));
  ASSERT_GE(v.size(), 1u);
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(db.entities[*v.items[i].entity_ref].labels.at("object")[0].id, cls);
  }
}

}  // namespace
}  // namespace vsumm
