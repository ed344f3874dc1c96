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

#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "vsumm/analysis_db.hpp"
#include "vsumm/synthetic.hpp"

namespace vsumm {
namespace {

constexpr char kMinimal[] = R"({
  "schema_version": 1,
  "video": {"duration_s": 1.0, "fps": 1.0},
  "frames": [{"t": 0.0, "features": {"scene": [0.6, 0.8]},
              "labels": {"scene": [[3, 0.9]]}, "hist": [0.25, 0.75]}],
  "entities": []
})";

std::string with_replacement(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

TEST(AnalysisDbTest, MinimalFileLoads) {
  const AnalysisDatabase db = parse_database(kMinimal);
  ASSERT_EQ(db.frames.size(), 1u);
  EXPECT_TRUE(db.entities.empty());
  EXPECT_DOUBLE_EQ(db.frames[0].labels.at("scene")[0].p, 0.9);
  EXPECT_FALSE(db.shots.has_value());
}

TEST(AnalysisDbTest, ProbabilityAboveOneNamesTheField) {
  const std::string bad = with_replacement(kMinimal, "[3, 0.9]", "[3, 1.3]");
  try {
    parse_database(bad);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "frames[0].labels.scene[0]");
  }
}

TEST(AnalysisDbTest, MalformedJsonIsParseError) {
  EXPECT_THROW(parse_database("{\"schema_version\": 1,"), ParseError);
  EXPECT_THROW(parse_database("[]"), ParseError);
  EXPECT_THROW(parse_database(R"({"schema_version": 1})"), ParseError);
}

TEST(AnalysisDbTest, UnknownSchemaVersionRejected) {
  EXPECT_THROW(parse_database(with_replacement(kMinimal, "\"schema_version\": 1", "\"schema_version\": 2")),
               ParseError);
}

TEST(AnalysisDbTest, EachInvariantIsChecked) {
  struct Case {
    std::string from, to, field;
  };
  const Case cases[] = {
      {"\"duration_s\": 1.0", "\"duration_s\": 5.0", "frames"},
      {"\"fps\": 1.0", "\"fps\": 0.0", "video.fps"},
      {"[0.6, 0.8]", "[0.6, 0.9]", "frames[0].features.scene"},
      {"[0.25, 0.75]", "[0.25, 0.5]", "frames[0].hist"},
      {"[0.25, 0.75]", "[-0.25, 1.25]", "frames[0].hist[0]"},
      {"[3, 0.9]", "[-1, 0.9]", "frames[0].labels.scene[0]"},
      {"\"t\": 0.0", "\"t\": 2.0", "frames[0].t"},
      {"\"entities\": []", R"("entities": [{"kind": "face", "frame": 4}])", "entities[0].frame"},
      {"\"entities\": []", R"("entities": [{"kind": "face", "frame": 0, "bbox": [0, 0, 0, 5]}])",
       "entities[0].bbox"},
      {"\"entities\": []", R"("entities": [], "shots": [0.5, 0.2])", "shots[1]"},
      {"\"entities\": []", R"("entities": [], "subtitles": [3.0])", "subtitles[0]"},
  };
  for (const Case& c : cases) {
    try {
      parse_database(with_replacement(kMinimal, c.from, c.to));
      ADD_FAILURE() << "accepted " << c.to;
    } catch (const ValidationError& e) {
      EXPECT_EQ(e.field(), c.field) << c.to;
    }
  }
}

TEST(AnalysisDbTest, NonIncreasingTimestampsRejected) {
  AnalysisDatabase db = parse_database(kMinimal);
  db.video.duration_s = 2.0;
  db.frames.push_back(db.frames[0]);
  try {
    validate(db);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "frames[1].t");
  }
}

TEST(AnalysisDbTest, ZeroFeatureVectorIsFlaggedNotRejected) {
  ValidationReport report;
  parse_database(with_replacement(kMinimal, "[0.6, 0.8]", "[0.0, 0.0]"), &report);
  ASSERT_EQ(report.degenerate_features.size(), 1u);
  EXPECT_EQ(report.degenerate_features[0], "frames[0].features.scene");
}

TEST(AnalysisDbTest, FrameCountToleranceIsOne) {
  // floor(1.9 * 1) = 1 frame expected; 2 frames is within one.
  AnalysisDatabase db = parse_database(kMinimal);
  db.video.duration_s = 1.9;
  db.frames.push_back(db.frames[0]);
  db.frames[1].t = 1.0;
  EXPECT_NO_THROW(validate(db));
}

TEST(AnalysisDbTest, RoundTripIsFieldForField) {
  SyntheticSpec spec;
  spec.objects = 4;
  spec.faces = 3;
  spec.humans = 2;
  spec.scenes = 2;
  spec.outliers = 2;
  spec.seed = 11;
  const AnalysisDatabase db = generate_synthetic(spec);
  EXPECT_EQ(parse_database(dump_database(db)), db);

  const auto path = std::filesystem::temp_directory_path() / "vsumm_roundtrip.json";
  save_database(db, path.string());
  EXPECT_EQ(load_database(path.string()), db);
  std::filesystem::remove(path);
}

TEST(AnalysisDbTest, MissingFileIsParseError) {
  EXPECT_THROW(load_database("/nonexistent/vsumm.json"), ParseError);
}

}  // namespace
}  // namespace vsumm
