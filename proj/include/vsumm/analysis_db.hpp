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

// The analysis database: everything offline visual analysis produced for a
// video (per-frame features, label probabilities, colour histograms and
// detected entities). It is the only input the summarizer reads.
//
// On disk it is UTF-8 JSON:
//
//   {"schema_version": 1,
//    "video": {"duration_s": 81.0, "fps": 1.0},
//    "frames": [{"t": 0.0,
//                "features": {"scene": [...], "object": [...]},
//                "labels": {"scene": [[id, p], ...], "object": [...]},
//                "hist": [...]}, ...],
//    "entities": [{"kind": "face", "frame": 12, "bbox": [x, y, w, h],
//                  "features": {...}, "labels": {...}, "hist": [...]}],
//    "shots": [...], "subtitles": [...]}
//
// Optional extensions: "vocabularies" maps a vocabulary to its label names,
// and "cluster" on frames/entities carries synthetic ground truth.

#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vsumm/error.hpp"

namespace vsumm {

inline constexpr int kSchemaVersion = 1;
inline constexpr double kUnitNormTolerance = 1e-6;
inline constexpr double kHistogramSumTolerance = 1e-6;

struct LabelScore {
  int id = 0;
  double p = 0.0;

  bool operator==(const LabelScore&) const = default;
};

// Vocabulary name ("scene", "object", "color", "face", "face_attr", ...) to
// the stored label probabilities.
using LabelMap = std::map<std::string, std::vector<LabelScore>>;
// Feature group name ("scene", "object", "face", ...) to a unit vector.
using FeatureMap = std::map<std::string, std::vector<double>>;

enum class EntityKind { object, face, human, scene };

inline std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::object: return "object";
    case EntityKind::face: return "face";
    case EntityKind::human: return "human";
    case EntityKind::scene: return "scene";
  }
  return "object";
}

inline std::optional<EntityKind> parse_entity_kind(std::string_view name) {
  if (name == "object") return EntityKind::object;
  if (name == "face") return EntityKind::face;
  if (name == "human") return EntityKind::human;
  if (name == "scene") return EntityKind::scene;
  return std::nullopt;
}

struct BoundingBox {
  double x = 0, y = 0, w = 0, h = 0;

  bool operator==(const BoundingBox&) const = default;
};

struct FrameRecord {
  double t = 0.0;
  FeatureMap features;
  LabelMap labels;
  std::vector<double> hist;  // empty when no histogram was stored
  int cluster = -1;          // ground-truth cluster, -1 when unknown

  bool operator==(const FrameRecord&) const = default;
};

struct EntityRecord {
  EntityKind kind = EntityKind::object;
  std::size_t frame = 0;
  std::optional<BoundingBox> bbox;
  FeatureMap features;
  LabelMap labels;
  std::vector<double> hist;
  int cluster = -1;

  bool operator==(const EntityRecord&) const = default;
};

struct VideoMeta {
  double duration_s = 0.0;
  double fps = 0.0;  // sampled frames per second

  bool operator==(const VideoMeta&) const = default;
};

struct AnalysisDatabase {
  int schema_version = kSchemaVersion;
  VideoMeta video;
  std::vector<FrameRecord> frames;
  std::vector<EntityRecord> entities;
  std::optional<std::vector<double>> shots;
  std::optional<std::vector<double>> subtitles;
  std::map<std::string, std::vector<std::string>> vocabularies;

  bool operator==(const AnalysisDatabase&) const = default;
};

// Non-fatal findings from validation.
struct ValidationReport {
  // Paths of all-zero feature vectors. They are accepted and contribute
  // similarity 0 to every other item.
  std::vector<std::string> degenerate_features;
};

namespace detail {

inline double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline bool all_zero(const std::vector<double>& v) {
  for (double x : v) {
    if (x != 0.0) return false;
  }
  return true;
}

inline void check_finite(const std::vector<double>& v, const std::string& path) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw ValidationError(path + "[" + std::to_string(i) + "]", "non-finite value");
    }
  }
}

inline void validate_features(const FeatureMap& features, const std::string& path,
                              ValidationReport& report) {
  for (const auto& [group, vec] : features) {
    const std::string where = path + ".features." + group;
    check_finite(vec, where);
    if (vec.empty()) throw ValidationError(where, "empty feature vector");
    if (all_zero(vec)) {
      report.degenerate_features.push_back(where);
      continue;
    }
    const double norm = l2_norm(vec);
    if (std::abs(norm - 1.0) > kUnitNormTolerance) {
      throw ValidationError(where, "feature vector norm " + std::to_string(norm) +
                                       " is not 1 (and vector is not all-zero)");
    }
  }
}

inline void validate_labels(const LabelMap& labels, const std::string& path) {
  for (const auto& [vocab, list] : labels) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = path + ".labels." + vocab + "[" + std::to_string(i) + "]";
      if (list[i].id < 0) throw ValidationError(where, "negative label id");
      const double p = list[i].p;
      if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream os;
        os << "probability " << p << " outside [0,1]";
        throw ValidationError(where, os.str());
      }
    }
  }
}

inline void validate_histogram(const std::vector<double>& hist, const std::string& path) {
  if (hist.empty()) return;
  const std::string where = path + ".hist";
  check_finite(hist, where);
  double sum = 0.0;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    if (hist[i] < 0.0) {
      throw ValidationError(where + "[" + std::to_string(i) + "]", "negative histogram entry");
    }
    sum += hist[i];
  }
  if (std::abs(sum - 1.0) > kHistogramSumTolerance) {
    throw ValidationError(where, "histogram sums to " + std::to_string(sum) + ", expected 1");
  }
}

inline void validate_boundaries(const std::optional<std::vector<double>>& bounds,
                                const std::string& name, double duration) {
  if (!bounds) return;
  const auto& b = *bounds;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const std::string where = name + "[" + std::to_string(i) + "]";
    if (!(b[i] >= 0.0 && b[i] <= duration)) {
      throw ValidationError(where, "boundary outside [0, duration]");
    }
    if (i > 0 && !(b[i] > b[i - 1])) {
      throw ValidationError(where, "boundaries not strictly increasing");
    }
  }
}

}  // namespace detail

// Checks every typed invariant and throws ValidationError naming the first
// violation. Degenerate (all-zero) feature vectors are reported, not
// rejected.
inline ValidationReport validate(const AnalysisDatabase& db) {
  ValidationReport report;
  if (db.schema_version != kSchemaVersion) {
    throw ValidationError("schema_version",
                          "unsupported schema version " + std::to_string(db.schema_version));
  }
  const double duration = db.video.duration_s;
  if (!(std::isfinite(duration) && duration > 0.0)) {
    throw ValidationError("video.duration_s", "duration must be positive");
  }
  if (!(std::isfinite(db.video.fps) && db.video.fps > 0.0)) {
    throw ValidationError("video.fps", "frame rate must be positive");
  }
  const double expected = std::floor(duration * db.video.fps);
  const double actual = static_cast<double>(db.frames.size());
  if (std::abs(actual - expected) > 1.0) {
    throw ValidationError("frames", "frame count " + std::to_string(db.frames.size()) +
                                        " does not match duration x fps = " +
                                        std::to_string(expected));
  }

  for (std::size_t i = 0; i < db.frames.size(); ++i) {
    const FrameRecord& f = db.frames[i];
    const std::string path = "frames[" + std::to_string(i) + "]";
    if (!(f.t >= 0.0 && f.t <= duration)) {
      throw ValidationError(path + ".t", "timestamp outside [0, duration]");
    }
    if (i > 0 && !(f.t > db.frames[i - 1].t)) {
      throw ValidationError(path + ".t", "timestamps not strictly increasing");
    }
    detail::validate_features(f.features, path, report);
    detail::validate_labels(f.labels, path);
    detail::validate_histogram(f.hist, path);
  }

  for (std::size_t i = 0; i < db.entities.size(); ++i) {
    const EntityRecord& e = db.entities[i];
    const std::string path = "entities[" + std::to_string(i) + "]";
    if (e.frame >= db.frames.size()) {
      throw ValidationError(path + ".frame", "frame index out of range");
    }
    if (e.bbox && !(e.bbox->w > 0.0 && e.bbox->h > 0.0)) {
      throw ValidationError(path + ".bbox", "bounding box must have positive size");
    }
    detail::validate_features(e.features, path, report);
    detail::validate_labels(e.labels, path);
    detail::validate_histogram(e.hist, path);
  }

  detail::validate_boundaries(db.shots, "shots", duration);
  detail::validate_boundaries(db.subtitles, "subtitles", duration);
  return report;
}

// ---------------------------------------------------------------------------
// JSON mapping

namespace detail {

using nlohmann::json;

inline json labels_to_json(const LabelMap& labels) {
  json out = json::object();
  for (const auto& [vocab, list] : labels) {
    json arr = json::array();
    for (const LabelScore& l : list) arr.push_back(json::array({l.id, l.p}));
    out[vocab] = std::move(arr);
  }
  return out;
}

inline json features_to_json(const FeatureMap& features) {
  json out = json::object();
  for (const auto& [group, vec] : features) out[group] = vec;
  return out;
}

inline LabelMap labels_from_json(const json& j) {
  LabelMap out;
  for (const auto& [vocab, arr] : j.items()) {
    std::vector<LabelScore> list;
    for (const json& pair : arr) {
      if (!pair.is_array() || pair.size() != 2) {
        throw ParseError("labels." + vocab + ": expected [id, p] pairs");
      }
      list.push_back({pair[0].get<int>(), pair[1].get<double>()});
    }
    out[vocab] = std::move(list);
  }
  return out;
}

inline FeatureMap features_from_json(const json& j) {
  FeatureMap out;
  for (const auto& [group, arr] : j.items()) out[group] = arr.get<std::vector<double>>();
  return out;
}

}  // namespace detail

inline nlohmann::json to_json(const AnalysisDatabase& db) {
  using nlohmann::json;
  json out;
  out["schema_version"] = db.schema_version;
  out["video"] = {{"duration_s", db.video.duration_s}, {"fps", db.video.fps}};
  json frames = json::array();
  for (const FrameRecord& f : db.frames) {
    json jf;
    jf["t"] = f.t;
    jf["features"] = detail::features_to_json(f.features);
    jf["labels"] = detail::labels_to_json(f.labels);
    jf["hist"] = f.hist;
    if (f.cluster >= 0) jf["cluster"] = f.cluster;
    frames.push_back(std::move(jf));
  }
  out["frames"] = std::move(frames);
  json entities = json::array();
  for (const EntityRecord& e : db.entities) {
    json je;
    je["kind"] = std::string(to_string(e.kind));
    je["frame"] = e.frame;
    if (e.bbox) je["bbox"] = {e.bbox->x, e.bbox->y, e.bbox->w, e.bbox->h};
    je["features"] = detail::features_to_json(e.features);
    je["labels"] = detail::labels_to_json(e.labels);
    je["hist"] = e.hist;
    if (e.cluster >= 0) je["cluster"] = e.cluster;
    entities.push_back(std::move(je));
  }
  out["entities"] = std::move(entities);
  if (db.shots) out["shots"] = *db.shots;
  if (db.subtitles) out["subtitles"] = *db.subtitles;
  if (!db.vocabularies.empty()) out["vocabularies"] = db.vocabularies;
  return out;
}

// Maps JSON onto the database types without checking invariants.
inline AnalysisDatabase from_json(const nlohmann::json& j) {
  using nlohmann::json;
  AnalysisDatabase db;
  try {
    if (!j.is_object()) throw ParseError("top level must be an object");
    db.schema_version = j.at("schema_version").get<int>();
    if (db.schema_version != kSchemaVersion) {
      throw ParseError("unsupported schema_version " + std::to_string(db.schema_version));
    }
    const json& video = j.at("video");
    db.video.duration_s = video.at("duration_s").get<double>();
    db.video.fps = video.at("fps").get<double>();
    for (const json& jf : j.at("frames")) {
      FrameRecord f;
      f.t = jf.at("t").get<double>();
      if (jf.contains("features")) f.features = detail::features_from_json(jf["features"]);
      if (jf.contains("labels")) f.labels = detail::labels_from_json(jf["labels"]);
      if (jf.contains("hist")) f.hist = jf["hist"].get<std::vector<double>>();
      if (jf.contains("cluster")) f.cluster = jf["cluster"].get<int>();
      db.frames.push_back(std::move(f));
    }
    if (j.contains("entities")) {
      for (const json& je : j["entities"]) {
        EntityRecord e;
        const auto kind_name = je.at("kind").get<std::string>();
        const auto kind = parse_entity_kind(kind_name);
        if (!kind) throw ParseError("unknown entity kind '" + kind_name + "'");
        e.kind = *kind;
        const auto frame = je.at("frame").get<long long>();
        if (frame < 0) throw ParseError("negative entity frame index");
        e.frame = static_cast<std::size_t>(frame);
        if (je.contains("bbox") && !je["bbox"].is_null()) {
          const auto b = je["bbox"].get<std::vector<double>>();
          if (b.size() != 4) throw ParseError("bbox must be [x, y, w, h]");
          e.bbox = BoundingBox{b[0], b[1], b[2], b[3]};
        }
        if (je.contains("features")) e.features = detail::features_from_json(je["features"]);
        if (je.contains("labels")) e.labels = detail::labels_from_json(je["labels"]);
        if (je.contains("hist")) e.hist = je["hist"].get<std::vector<double>>();
        if (je.contains("cluster")) e.cluster = je["cluster"].get<int>();
        db.entities.push_back(std::move(e));
      }
    }
    if (j.contains("shots") && !j["shots"].is_null()) {
      db.shots = j["shots"].get<std::vector<double>>();
    }
    if (j.contains("subtitles") && !j["subtitles"].is_null()) {
      db.subtitles = j["subtitles"].get<std::vector<double>>();
    }
    if (j.contains("vocabularies")) {
      db.vocabularies = j["vocabularies"].get<std::map<std::string, std::vector<std::string>>>();
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("schema mismatch: ") + e.what());
  }
  return db;
}

// Parses and validates a database held in memory.
inline AnalysisDatabase parse_database(std::string_view text, ValidationReport* report = nullptr) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  AnalysisDatabase db = from_json(j);
  ValidationReport r = validate(db);
  if (report) *report = std::move(r);
  return db;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline AnalysisDatabase load_database(const std::string& path, ValidationReport* report = nullptr) {
  return parse_database(read_file(path), report);
}

inline std::string dump_database(const AnalysisDatabase& db) { return to_json(db).dump(); }

inline void save_database(const AnalysisDatabase& db, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << dump_database(db);
}

}  // namespace vsumm
