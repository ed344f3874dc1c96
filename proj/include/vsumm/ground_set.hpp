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

// Ground sets: the selectable items of one summarization mode.
//
//   keyframes  one item per sampled frame, cost 1
//   snippets   contiguous intervals (fixed length, shots or subtitles),
//              cost = length in seconds
//   entities   one item per detected entity of a kind, cost 1
//
// Each item carries an ItemView: the features, labels and histogram the
// objectives see. For snippets the view pools member frames: features are
// averaged then re-normalized, label probabilities are max-pooled and
// histograms are averaged.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vsumm/analysis_db.hpp"
#include "vsumm/error.hpp"

namespace vsumm {

enum class GroundSetKind { keyframe, snippet, entity };

inline std::string_view to_string(GroundSetKind kind) {
  switch (kind) {
    case GroundSetKind::keyframe: return "keyframe";
    case GroundSetKind::snippet: return "snippet";
    case GroundSetKind::entity: return "entity";
  }
  return "keyframe";
}

struct TimeRange {
  double start_s = 0.0;
  double end_s = 0.0;

  double length() const { return end_s - start_s; }
  bool operator==(const TimeRange&) const = default;
};

struct Item {
  std::size_t id = 0;                      // index into the ground set
  std::vector<std::size_t> source_frames;  // indices into AnalysisDatabase::frames
  TimeRange time_range;
  double cost = 1.0;
  std::optional<std::size_t> entity_ref;  // index into AnalysisDatabase::entities

  bool operator==(const Item&) const = default;
};

struct ItemView {
  FeatureMap features;
  LabelMap labels;
  std::vector<double> hist;

  bool operator==(const ItemView&) const = default;
};

struct GroundSet {
  GroundSetKind kind = GroundSetKind::keyframe;
  std::optional<EntityKind> entity_kind;
  std::vector<Item> items;
  std::vector<ItemView> views;
  // origin[i] is the id item i had in the unfiltered ground set.
  std::vector<std::size_t> origin;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }

  double total_cost() const {
    double sum = 0.0;
    for (const Item& item : items) sum += item.cost;
    return sum;
  }

  std::vector<double> costs() const {
    std::vector<double> out;
    out.reserve(items.size());
    for (const Item& item : items) out.push_back(item.cost);
    return out;
  }
};

// How a skim's snippets are delimited.
struct SnippetMode {
  enum class Kind { fixed, shots, subtitles };
  Kind kind = Kind::fixed;
  double seconds = 2.0;  // fixed mode only

  // "fixed:2", "shots" or "subtitles".
  static SnippetMode parse(std::string_view text) {
    if (text == "shots") return {Kind::shots, 0.0};
    if (text == "subtitles") return {Kind::subtitles, 0.0};
    if (text.starts_with("fixed:")) {
      const std::string number(text.substr(6));
      char* end = nullptr;
      const double s = std::strtod(number.c_str(), &end);
      if (end == number.c_str() || *end != '\0' || !(s > 0.0)) {
        throw InvalidArgument("invalid snippet length in '" + std::string(text) + "'");
      }
      return {Kind::fixed, s};
    }
    throw InvalidArgument("unknown snippet mode '" + std::string(text) + "'");
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::shots: return "shots";
      case Kind::subtitles: return "subtitles";
      case Kind::fixed: break;
    }
    std::string s = std::to_string(seconds);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return "fixed:" + s;
  }
};

namespace detail {

inline ItemView view_of(const FrameRecord& f) { return {f.features, f.labels, f.hist}; }
inline ItemView view_of(const EntityRecord& e) { return {e.features, e.labels, e.hist}; }

// Mean feature per group (re-normalized), max-pooled labels, mean histogram.
inline ItemView pool_frames(const AnalysisDatabase& db, const std::vector<std::size_t>& members) {
  ItemView view;
  std::map<std::string, std::size_t> feature_counts;
  std::map<std::string, std::map<int, double>> label_max;
  std::size_t hist_count = 0;
  for (std::size_t idx : members) {
    const FrameRecord& f = db.frames[idx];
    for (const auto& [group, vec] : f.features) {
      auto& acc = view.features[group];
      if (acc.empty()) acc.assign(vec.size(), 0.0);
      if (acc.size() != vec.size()) {
        throw InvalidArgument("feature group '" + group + "' changes dimension across frames");
      }
      for (std::size_t d = 0; d < vec.size(); ++d) acc[d] += vec[d];
      ++feature_counts[group];
    }
    for (const auto& [vocab, list] : f.labels) {
      auto& best = label_max[vocab];
      for (const LabelScore& l : list) {
        auto [it, inserted] = best.emplace(l.id, l.p);
        if (!inserted) it->second = std::max(it->second, l.p);
      }
    }
    if (!f.hist.empty()) {
      if (view.hist.empty()) view.hist.assign(f.hist.size(), 0.0);
      if (view.hist.size() != f.hist.size()) throw InvalidArgument("histogram size changes across frames");
      for (std::size_t b = 0; b < f.hist.size(); ++b) view.hist[b] += f.hist[b];
      ++hist_count;
    }
  }
  for (auto& [group, acc] : view.features) {
    const double norm = l2_norm(acc);
    if (norm > 0.0) {
      for (double& x : acc) x /= norm;
    }
  }
  for (const auto& [vocab, best] : label_max) {
    auto& list = view.labels[vocab];
    for (const auto& [id, p] : best) list.push_back({id, p});
  }
  if (hist_count > 0) {
    for (double& x : view.hist) x /= static_cast<double>(hist_count);
  }
  return view;
}

inline void finalize_ids(GroundSet& gs) {
  gs.origin.resize(gs.items.size());
  for (std::size_t i = 0; i < gs.items.size(); ++i) {
    gs.items[i].id = i;
    gs.origin[i] = i;
  }
}

inline double frame_period(const AnalysisDatabase& db) { return 1.0 / db.video.fps; }

// Builds snippets from interval edges [0, b_1, ..., b_m, T].
inline GroundSet snippets_from_edges(const AnalysisDatabase& db, const std::vector<double>& edges) {
  GroundSet gs;
  gs.kind = GroundSetKind::snippet;
  std::size_t next_frame = 0;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    Item item;
    item.time_range = {edges[s], edges[s + 1]};
    item.cost = edges[s + 1] - edges[s];
    const bool last = s + 2 == edges.size();
    while (next_frame < db.frames.size() &&
           (db.frames[next_frame].t < edges[s + 1] || last)) {
      item.source_frames.push_back(next_frame++);
    }
    if (item.source_frames.empty()) {
      // Snippet shorter than the sampling period: borrow the nearest frame.
      const double mid = 0.5 * (edges[s] + edges[s + 1]);
      std::size_t best = 0;
      for (std::size_t f = 1; f < db.frames.size(); ++f) {
        if (std::abs(db.frames[f].t - mid) < std::abs(db.frames[best].t - mid)) best = f;
      }
      item.source_frames.push_back(best);
    }
    gs.views.push_back(pool_frames(db, item.source_frames));
    gs.items.push_back(std::move(item));
  }
  finalize_ids(gs);
  return gs;
}

}  // namespace detail

// One item per frame; |V| = frames = F x T.
inline GroundSet build_keyframe_groundset(const AnalysisDatabase& db) {
  if (db.frames.empty()) throw InvalidArgument("database has no frames");
  GroundSet gs;
  gs.kind = GroundSetKind::keyframe;
  const double period = detail::frame_period(db);
  for (std::size_t i = 0; i < db.frames.size(); ++i) {
    Item item;
    item.source_frames = {i};
    const double t = db.frames[i].t;
    item.time_range = {t, std::min(t + period, db.video.duration_s)};
    if (item.time_range.end_s <= t) item.time_range.end_s = t + period;
    item.cost = 1.0;
    gs.items.push_back(std::move(item));
    gs.views.push_back(detail::view_of(db.frames[i]));
  }
  detail::finalize_ids(gs);
  return gs;
}

inline GroundSet build_snippet_groundset(const AnalysisDatabase& db, const SnippetMode& mode) {
  if (db.frames.empty()) throw InvalidArgument("database has no frames");
  const double duration = db.video.duration_s;
  std::vector<double> edges{0.0};
  switch (mode.kind) {
    case SnippetMode::Kind::fixed: {
      const double s = mode.seconds;
      if (!(s > 0.0 && s <= duration)) {
        throw InvalidArgument("snippet length must satisfy 0 < S <= duration");
      }
      auto count = static_cast<std::size_t>(std::ceil(duration / s));
      // ceil(T/S) in exact arithmetic: drop a trailing sliver created by rounding.
      if (count > 1 && duration - static_cast<double>(count - 1) * s <= 1e-9) --count;
      for (std::size_t i = 1; i < count; ++i) edges.push_back(static_cast<double>(i) * s);
      break;
    }
    case SnippetMode::Kind::shots:
    case SnippetMode::Kind::subtitles: {
      const bool shots = mode.kind == SnippetMode::Kind::shots;
      const auto& bounds = shots ? db.shots : db.subtitles;
      if (!bounds) {
        throw InvalidArgument(std::string("database has no ") + (shots ? "shot" : "subtitle") +
                              " boundaries");
      }
      for (double b : *bounds) {
        if (b > 0.0 && b < duration) edges.push_back(b);
      }
      break;
    }
  }
  edges.push_back(duration);
  return detail::snippets_from_edges(db, edges);
}

inline GroundSet build_entity_groundset(const AnalysisDatabase& db, EntityKind kind) {
  GroundSet gs;
  gs.kind = GroundSetKind::entity;
  gs.entity_kind = kind;
  const double period = detail::frame_period(db);
  for (std::size_t e = 0; e < db.entities.size(); ++e) {
    const EntityRecord& rec = db.entities[e];
    if (rec.kind != kind) continue;
    Item item;
    item.source_frames = {rec.frame};
    const double t = db.frames[rec.frame].t;
    item.time_range = {t, t + period};
    item.cost = 1.0;
    item.entity_ref = e;
    gs.items.push_back(std::move(item));
    gs.views.push_back(detail::view_of(rec));
  }
  if (gs.items.empty()) {
    throw InvalidArgument("database has no entities of kind '" + std::string(to_string(kind)) + "'");
  }
  detail::finalize_ids(gs);
  return gs;
}

// Keeps the items for which keep(i) is true, preserving provenance.
template <class Predicate>
GroundSet subset(const GroundSet& gs, Predicate keep) {
  GroundSet out;
  out.kind = gs.kind;
  out.entity_kind = gs.entity_kind;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (!keep(i)) continue;
    Item item = gs.items[i];
    item.id = out.items.size();
    out.items.push_back(std::move(item));
    out.views.push_back(gs.views[i]);
    out.origin.push_back(gs.origin[i]);
  }
  return out;
}

// Restricts to items overlapping [start_s, end_s).
inline GroundSet filter_by_time(const GroundSet& gs, double start_s, double end_s) {
  if (!(end_s > start_s)) throw InvalidArgument("time window must have end > start");
  GroundSet out = subset(gs, [&](std::size_t i) {
    const TimeRange& r = gs.items[i].time_range;
    return r.end_s > start_s && r.start_s < end_s;
  });
  if (out.empty()) throw EmptyQueryResult("no items inside the time window");
  return out;
}

}  // namespace vsumm
