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

// Synthetic analysis databases with known latent structure.
//
// Frames are laid out in contiguous temporal segments, one latent cluster
// per segment (cycling through clusters when segments_per_cluster > 1).
// Every frame records its cluster in FrameRecord::cluster. Cluster c gets:
//   - scene/object feature centres with disjoint non-negative supports
//     (when clusters <= dim), so cross-cluster cosines are near zero;
//   - dominant labels scene:c, object:c and color:(c mod 12) with
//     probability >= 0.6, plus distractor labels with probability <= 0.3;
//   - a colour histogram drawn around a per-cluster base.
// Shot boundaries are placed at segment changes. Outlier frames get random
// directions and cluster -1.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vsumm/analysis_db.hpp"
#include "vsumm/error.hpp"

namespace vsumm {

struct SyntheticSpec {
  double duration_s = 60.0;
  double fps = 1.0;
  int clusters = 3;
  int dim = 16;
  int hist_bins = 64;
  int segments_per_cluster = 1;
  int outliers = 0;
  int objects = 0;
  int faces = 0;
  int humans = 0;
  int scenes = 0;
  int scene_vocab = 16;
  int object_vocab = 32;
  int identities = 4;  // face / human identities
  double noise = 0.05;
  bool subtitles = true;
  std::uint64_t seed = 0;
};

inline constexpr int kColorClasses = 12;
inline constexpr int kAgeBuckets = 8;

inline const std::vector<std::string>& color_names() {
  static const std::vector<std::string> names = {
      "red",    "green",  "blue",   "black",  "white", "grey",
      "purple", "violet", "yellow", "orange", "brown", "pink"};
  return names;
}

// Age/gender cross product: id = 2 * age_bucket + gender (0 male, 1 female).
inline const std::vector<std::string>& face_attribute_names() {
  static const std::vector<std::string> names = [] {
    const char* ages[kAgeBuckets] = {"0-2",   "4-6",   "8-12",  "15-20",
                                     "25-32", "38-43", "48-53", "60-100"};
    std::vector<std::string> out;
    for (const char* age : ages) {
      out.push_back(std::string("male_") + age);
      out.push_back(std::string("female_") + age);
    }
    return out;
  }();
  return names;
}

namespace detail {

class SyntheticBuilder {
 public:
  explicit SyntheticBuilder(const SyntheticSpec& spec) : spec_(spec), rng_(spec.seed) {}

  AnalysisDatabase build() {
    AnalysisDatabase db;
    db.video = {spec_.duration_s, spec_.fps};
    make_vocabularies(db);

    const int dim = spec_.dim;
    scene_centres_ = make_centres(spec_.clusters, dim);
    object_centres_ = make_centres(spec_.clusters, dim);
    for (int c = 0; c < spec_.clusters; ++c) hist_bases_.push_back(random_histogram_base());
    object_class_centres_ = make_centres(spec_.object_vocab, dim);
    identity_centres_ = make_centres(spec_.identities, dim);
    human_centres_ = make_centres(spec_.identities, dim);
    for (int i = 0; i < spec_.identities; ++i) {
      identity_attr_.push_back(uniform_int(0, 2 * kAgeBuckets - 1));
    }

    const auto n = static_cast<std::size_t>(std::floor(spec_.duration_s * spec_.fps));
    const int segments = spec_.clusters * spec_.segments_per_cluster;
    std::vector<double> shots;
    int last_segment = -1;
    for (std::size_t i = 0; i < n; ++i) {
      const int segment = static_cast<int>((i * static_cast<std::size_t>(segments)) / n);
      const double t = static_cast<double>(i) / spec_.fps;
      if (segment != last_segment && i > 0) shots.push_back(t);
      last_segment = segment;
      db.frames.push_back(make_frame(t, segment % spec_.clusters));
    }
    db.shots = std::move(shots);

    // Outliers replace randomly chosen frames.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng_);
    for (int o = 0; o < spec_.outliers; ++o) make_outlier(db.frames[order[o]]);

    if (spec_.subtitles) db.subtitles = make_subtitles();

    for (int i = 0; i < spec_.objects; ++i) db.entities.push_back(make_object(db));
    for (int i = 0; i < spec_.faces; ++i) db.entities.push_back(make_face(db));
    for (int i = 0; i < spec_.humans; ++i) db.entities.push_back(make_human(db));
    for (int i = 0; i < spec_.scenes; ++i) db.entities.push_back(make_scene(db));
    return db;
  }

 private:
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double gaussian() { return normal_(rng_); }

  static void normalize(std::vector<double>& v) {
    const double norm = l2_norm(v);
    if (norm > 0.0) {
      for (double& x : v) x /= norm;
    }
  }

  std::vector<std::vector<double>> make_centres(int count, int dim) {
    std::vector<std::vector<double>> centres;
    for (int c = 0; c < count; ++c) {
      std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
      if (count <= dim) {
        for (int d = c; d < dim; d += count) v[d] = 0.5 + std::abs(gaussian());
      } else {
        const int active = std::max(1, dim / 4);
        for (int a = 0; a < active; ++a) v[uniform_int(0, dim - 1)] = 0.5 + std::abs(gaussian());
      }
      normalize(v);
      centres.push_back(std::move(v));
    }
    return centres;
  }

  std::vector<double> perturb(const std::vector<double>& centre) {
    std::vector<double> v(centre.size());
    for (std::size_t d = 0; d < v.size(); ++d) {
      v[d] = std::max(0.0, centre[d] + spec_.noise * gaussian());
    }
    if (all_zero(v)) v = centre;
    normalize(v);
    return v;
  }

  std::vector<double> random_direction() {
    std::vector<double> v(static_cast<std::size_t>(spec_.dim));
    for (double& x : v) x = std::abs(gaussian());
    if (all_zero(v)) v[0] = 1.0;
    normalize(v);
    return v;
  }

  std::vector<double> random_histogram_base() {
    std::gamma_distribution<double> gamma(0.3, 1.0);
    std::vector<double> h(static_cast<std::size_t>(spec_.hist_bins));
    double sum = 0.0;
    for (double& x : h) {
      x = gamma(rng_) + 1e-6;
      sum += x;
    }
    for (double& x : h) x /= sum;
    return h;
  }

  std::vector<double> perturb_histogram(const std::vector<double>& base) {
    std::vector<double> h(base.size());
    double sum = 0.0;
    for (std::size_t b = 0; b < h.size(); ++b) {
      h[b] = std::max(0.0, base[b] * (1.0 + spec_.noise * gaussian()));
      sum += h[b];
    }
    if (sum <= 0.0) return base;
    for (double& x : h) x /= sum;
    return h;
  }

  // Dominant label plus distractors that never clear 0.3.
  std::vector<LabelScore> labels_with_distractors(int dominant, double lo, double hi, int vocab,
                                                  int distractors) {
    std::vector<LabelScore> out{{dominant, uniform(lo, hi)}};
    for (int d = 0; d < distractors && vocab > 1; ++d) {
      int id = uniform_int(0, vocab - 2);
      if (id >= dominant) ++id;
      const bool seen = std::any_of(out.begin(), out.end(), [&](const LabelScore& l) { return l.id == id; });
      if (!seen) out.push_back({id, uniform(0.01, 0.3)});
    }
    std::sort(out.begin(), out.end(), [](const LabelScore& a, const LabelScore& b) { return a.id < b.id; });
    return out;
  }

  FrameRecord make_frame(double t, int cluster) {
    FrameRecord f;
    f.t = t;
    f.cluster = cluster;
    f.features["scene"] = perturb(scene_centres_[cluster]);
    f.features["object"] = perturb(object_centres_[cluster]);
    f.labels["scene"] = labels_with_distractors(cluster % spec_.scene_vocab, 0.7, 0.95, spec_.scene_vocab, 2);
    f.labels["object"] = labels_with_distractors(cluster % spec_.object_vocab, 0.6, 0.95, spec_.object_vocab, 2);
    f.labels["color"] = labels_with_distractors(cluster % kColorClasses, 0.6, 0.9, kColorClasses, 1);
    f.hist = perturb_histogram(hist_bases_[cluster]);
    return f;
  }

  void make_outlier(FrameRecord& f) {
    f.cluster = -1;
    f.features["scene"] = random_direction();
    f.features["object"] = random_direction();
    f.labels["scene"] = labels_with_distractors(uniform_int(0, spec_.scene_vocab - 1), 0.5, 0.9, spec_.scene_vocab, 2);
    f.labels["object"] = labels_with_distractors(uniform_int(0, spec_.object_vocab - 1), 0.5, 0.9, spec_.object_vocab, 2);
    f.labels["color"] = labels_with_distractors(uniform_int(0, kColorClasses - 1), 0.5, 0.9, kColorClasses, 1);
    f.hist = random_histogram_base();
  }

  std::vector<double> make_subtitles() {
    std::vector<double> out;
    double t = uniform(2.0, 6.0);
    while (t < spec_.duration_s) {
      out.push_back(t);
      t += uniform(2.0, 8.0);
    }
    return out;
  }

  std::size_t random_frame(const AnalysisDatabase& db) {
    return static_cast<std::size_t>(uniform_int(0, static_cast<int>(db.frames.size()) - 1));
  }

  BoundingBox random_bbox() {
    return {uniform(0.0, 1200.0), uniform(0.0, 600.0), uniform(16.0, 400.0), uniform(16.0, 400.0)};
  }

  EntityRecord make_object(const AnalysisDatabase& db) {
    EntityRecord e;
    e.kind = EntityKind::object;
    e.frame = random_frame(db);
    const int frame_cluster = db.frames[e.frame].cluster;
    int cls = uniform_int(0, spec_.object_vocab - 1);
    if (frame_cluster >= 0 && uniform(0.0, 1.0) < 0.7) cls = frame_cluster % spec_.object_vocab;
    e.cluster = cls;
    e.bbox = random_bbox();
    e.features["object"] = perturb(object_class_centres_[cls]);
    e.labels["object"] = {{cls, uniform(0.6, 0.99)}};
    e.labels["color"] = {{uniform_int(0, kColorClasses - 1), uniform(0.5, 0.9)}};
    e.hist = random_histogram_base();
    return e;
  }

  EntityRecord make_face(const AnalysisDatabase& db) {
    EntityRecord e;
    e.kind = EntityKind::face;
    e.frame = random_frame(db);
    const int identity = uniform_int(0, spec_.identities - 1);
    e.cluster = identity;
    e.bbox = random_bbox();
    e.features["face"] = perturb(identity_centres_[identity]);
    e.labels["face"] = {{identity, uniform(0.6, 0.99)}};
    e.labels["face_attr"] = {{identity_attr_[identity], uniform(0.5, 0.95)}};
    e.hist = random_histogram_base();
    return e;
  }

  EntityRecord make_human(const AnalysisDatabase& db) {
    EntityRecord e;
    e.kind = EntityKind::human;
    e.frame = random_frame(db);
    const int identity = uniform_int(0, spec_.identities - 1);
    e.cluster = identity;
    e.bbox = random_bbox();
    e.features["object"] = perturb(human_centres_[identity]);
    e.labels["object"] = {{0, uniform(0.6, 0.99)}};  // object:0 is "person"
    e.labels["face_attr"] = {{identity_attr_[identity], uniform(0.5, 0.95)}};
    e.labels["color"] = {{identity % kColorClasses, uniform(0.5, 0.9)}};
    e.hist = random_histogram_base();
    return e;
  }

  EntityRecord make_scene(const AnalysisDatabase& db) {
    EntityRecord e;
    e.kind = EntityKind::scene;
    e.frame = random_frame(db);
    const FrameRecord& f = db.frames[e.frame];
    e.cluster = f.cluster;
    e.features["scene"] = f.features.at("scene");
    e.labels["scene"] = f.labels.at("scene");
    e.labels["color"] = f.labels.at("color");
    e.hist = f.hist;
    return e;
  }

  void make_vocabularies(AnalysisDatabase& db) const {
    auto numbered = [](const std::string& prefix, int count) {
      std::vector<std::string> out;
      for (int i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
      return out;
    };
    db.vocabularies["scene"] = numbered("scene_", spec_.scene_vocab);
    auto objects = numbered("object_", spec_.object_vocab);
    objects[0] = "person";
    db.vocabularies["object"] = std::move(objects);
    db.vocabularies["color"] = color_names();
    db.vocabularies["face"] = numbered("identity_", spec_.identities);
    db.vocabularies["face_attr"] = face_attribute_names();
  }

  SyntheticSpec spec_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::vector<std::vector<double>> scene_centres_, object_centres_;
  std::vector<std::vector<double>> object_class_centres_, identity_centres_, human_centres_;
  std::vector<std::vector<double>> hist_bases_;
  std::vector<int> identity_attr_;
};

}  // namespace detail

inline void validate(const SyntheticSpec& spec) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidArgument(std::string("invalid synthetic spec: ") + what);
  };
  require(std::isfinite(spec.duration_s) && spec.duration_s > 0.0, "duration must be positive");
  require(std::isfinite(spec.fps) && spec.fps > 0.0, "fps must be positive");
  require(std::floor(spec.duration_s * spec.fps) >= 1.0, "duration x fps must give at least one frame");
  require(spec.clusters >= 1, "clusters must be >= 1");
  require(spec.dim >= 1, "dim must be >= 1");
  require(spec.hist_bins >= 2, "hist_bins must be >= 2");
  require(spec.segments_per_cluster >= 1, "segments_per_cluster must be >= 1");
  require(spec.scene_vocab >= 1 && spec.object_vocab >= 1, "vocabulary sizes must be >= 1");
  require(spec.identities >= 1, "identities must be >= 1");
  require(spec.objects >= 0 && spec.faces >= 0 && spec.humans >= 0 && spec.scenes >= 0,
          "entity counts must be non-negative");
  require(spec.outliers >= 0 && spec.outliers <= std::floor(spec.duration_s * spec.fps),
          "outliers must be between 0 and the frame count");
  require(spec.noise >= 0.0, "noise must be non-negative");
}

// Deterministic for a fixed spec (including seed).
inline AnalysisDatabase generate_synthetic(const SyntheticSpec& spec) {
  validate(spec);
  return detail::SyntheticBuilder(spec).build();
}

}  // namespace vsumm
