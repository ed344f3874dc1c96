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

// Summarization engine: database registry, request/response schema,
// ground-set and kernel caches, cut lists and database statistics.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vsumm/analysis_db.hpp"
#include "vsumm/error.hpp"
#include "vsumm/functions/objective.hpp"
#include "vsumm/ground_set.hpp"
#include "vsumm/instantiate.hpp"
#include "vsumm/kernel.hpp"
#include "vsumm/optimize.hpp"
#include "vsumm/query.hpp"

namespace vsumm {

enum class SummaryMode { keyframes, skim, entities };

inline std::string_view to_string(SummaryMode mode) {
  switch (mode) {
    case SummaryMode::keyframes: return "keyframes";
    case SummaryMode::skim: return "skim";
    case SummaryMode::entities: return "entities";
  }
  return "keyframes";
}

inline SummaryMode parse_summary_mode(std::string_view text) {
  if (text == "keyframes") return SummaryMode::keyframes;
  if (text == "skim") return SummaryMode::skim;
  if (text == "entities") return SummaryMode::entities;
  throw InvalidArgument("unknown mode '" + std::string(text) + "' (expected keyframes, skim or entities)");
}

struct SummaryRequest {
  SummaryMode mode = SummaryMode::keyframes;
  std::optional<EntityKind> entity;
  FunctionSpec function;
  Constraint constraint = Cardinality{5};
  std::string snippets = "fixed:2";    // skim mode only
  std::optional<std::string> kernel;   // recipe text; default per ground set
  std::optional<std::size_t> knn;
  std::optional<std::string> query;
  std::optional<TimeRange> window;
  bool lazy = true;
  bool verify = false;
  bool include_timings = true;  // false makes responses byte-identical across runs

  bool operator==(const SummaryRequest&) const = default;

  // Mode/constraint compatibility; throws InvalidArgument.
  void check() const {
    if (mode == SummaryMode::entities && !entity) throw InvalidArgument("entities mode needs an entity kind");
    if (mode != SummaryMode::entities && entity) throw InvalidArgument("entity kind is only valid in entities mode");
    if (std::holds_alternative<Cover>(constraint) && !function.monotone_submodular()) {
      throw InvalidArgument("the cover constraint needs a monotone objective; " + function.name() + " is not");
    }
    if (const auto* c = std::get_if<Cardinality>(&constraint); c && c->k == 0) {
      throw InvalidArgument("k must be >= 1");
    }
    if (const auto* c = std::get_if<Knapsack>(&constraint); c && !(c->budget > 0.0)) {
      throw InvalidArgument("budget_s must be > 0");
    }
    if (const auto* c = std::get_if<Cover>(&constraint); c && !(c->fraction > 0.0 && c->fraction <= 1.0)) {
      throw InvalidArgument("cover must lie in (0, 1]");
    }
    if (mode == SummaryMode::skim) SnippetMode::parse(snippets);
    if (kernel) KernelRecipe::parse(*kernel);
    if (window && !(window->end_s > window->start_s)) throw InvalidArgument("window must have end > start");
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["mode"] = std::string(to_string(mode));
    if (entity) j["entity"] = std::string(vsumm::to_string(*entity));
    j["function"] = function.name();
    std::visit(
        [&](const auto& c) {
          using C = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<C, Cardinality>) j["k"] = c.k;
          if constexpr (std::is_same_v<C, Knapsack>) j["budget_s"] = c.budget;
          if constexpr (std::is_same_v<C, Cover>) j["cover"] = c.fraction;
        },
        constraint);
    j["snippets"] = snippets;
    if (kernel) j["kernel"] = *kernel;
    if (knn) j["knn"] = *knn;
    if (query) j["query"] = *query;
    if (window) j["window"] = {window->start_s, window->end_s};
    j["lazy"] = lazy;
    if (verify) j["verify"] = true;
    j["include_timings"] = include_timings;
    return j;
  }

  static SummaryRequest from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("summary request must be a JSON object");
    static const std::vector<std::string> known = {"mode",  "entity", "function", "k",     "budget_s",
                                                   "cover", "snippets", "kernel", "knn",   "query",
                                                   "window", "lazy", "verify", "include_timings"};
    for (const auto& [key, value] : j.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw ParseError("unknown request field '" + key + "'");
      }
    }
    auto string_field = [&](const char* key) -> std::optional<std::string> {
      if (!j.contains(key) || j[key].is_null()) return std::nullopt;
      if (!j[key].is_string()) throw ParseError(std::string("'") + key + "' must be a string");
      return j[key].get<std::string>();
    };
    auto bool_field = [&](const char* key, bool fallback) {
      if (!j.contains(key)) return fallback;
      if (!j[key].is_boolean()) throw ParseError(std::string("'") + key + "' must be a boolean");
      return j[key].get<bool>();
    };
    auto number_field = [&](const char* key) -> std::optional<double> {
      if (!j.contains(key) || j[key].is_null()) return std::nullopt;
      if (!j[key].is_number()) throw ParseError(std::string("'") + key + "' must be a number");
      return j[key].get<double>();
    };
    auto count_field = [&](const char* key) -> std::optional<std::size_t> {
      if (!j.contains(key) || j[key].is_null()) return std::nullopt;
      if (!j[key].is_number_integer() || j[key].get<long long>() < 1) {
        throw ParseError(std::string("'") + key + "' must be a positive integer");
      }
      return j[key].get<std::size_t>();
    };

    SummaryRequest r;
    try {
      if (auto mode = string_field("mode")) r.mode = parse_summary_mode(*mode);
      if (auto entity = string_field("entity")) {
        r.entity = parse_entity_kind(*entity);
        if (!r.entity) throw InvalidArgument("unknown entity kind '" + *entity + "'");
      }
      if (auto fn = string_field("function")) r.function = FunctionSpec::parse(*fn);
      const auto k = count_field("k");
      const auto budget = number_field("budget_s");
      const auto cover = number_field("cover");
      if ((k ? 1 : 0) + (budget ? 1 : 0) + (cover ? 1 : 0) > 1) {
        throw ParseError("give at most one of k, budget_s and cover");
      }
      if (k) r.constraint = Cardinality{*k};
      if (budget) r.constraint = Knapsack{*budget};
      if (cover) r.constraint = Cover{*cover};
      if (auto s = string_field("snippets")) r.snippets = *s;
      r.kernel = string_field("kernel");
      r.knn = count_field("knn");
      r.query = string_field("query");
      if (j.contains("window") && !j["window"].is_null()) {
        const auto& w = j["window"];
        if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
          throw ParseError("'window' must be [start_s, end_s]");
        }
        r.window = TimeRange{w[0].get<double>(), w[1].get<double>()};
      }
      r.lazy = bool_field("lazy", true);
      r.verify = bool_field("verify", false);
      r.include_timings = bool_field("include_timings", true);
      r.check();
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what());
    }
    return r;
  }
};

// Selected items' time ranges, sorted and merged where they touch.
inline std::vector<TimeRange> make_cut_list(const GroundSet& gs, std::span<const std::size_t> selected) {
  std::vector<TimeRange> ranges;
  ranges.reserve(selected.size());
  for (std::size_t id : selected) ranges.push_back(gs.items.at(id).time_range);
  std::sort(ranges.begin(), ranges.end(),
            [](const TimeRange& a, const TimeRange& b) { return a.start_s < b.start_s; });
  std::vector<TimeRange> out;
  for (const TimeRange& r : ranges) {
    if (!out.empty() && r.start_s <= out.back().end_s + 1e-9) {
      out.back().end_s = std::max(out.back().end_s, r.end_s);
    } else {
      out.push_back(r);
    }
  }
  return out;
}

inline double cut_list_length(const std::vector<TimeRange>& cuts) {
  double total = 0.0;
  for (const TimeRange& r : cuts) total += r.length();
  return total;
}

// Byte-budgeted least-recently-used cache of immutable shared objects.
class LruCache {
 public:
  explicit LruCache(std::size_t capacity_bytes) : capacity_(capacity_bytes) {}

  template <class T>
  std::shared_ptr<const T> get(const std::string& key) {
    std::lock_guard lock(mu_);
    const auto it = index_.find(key);
    if (it == index_.end()) {
      ++misses_;
      return nullptr;
    }
    order_.splice(order_.begin(), order_, it->second);
    ++hits_;
    return std::static_pointer_cast<const T>(it->second->value);
  }

  // Objects larger than the whole budget are not retained.
  template <class T>
  void put(const std::string& key, std::shared_ptr<const T> value, std::size_t bytes) {
    std::lock_guard lock(mu_);
    if (const auto it = index_.find(key); it != index_.end()) {
      used_ -= it->second->bytes;
      order_.erase(it->second);
      index_.erase(it);
    }
    if (bytes > capacity_) return;
    while (used_ + bytes > capacity_ && !order_.empty()) {
      used_ -= order_.back().bytes;
      index_.erase(order_.back().key);
      order_.pop_back();
      ++evictions_;
    }
    order_.push_front({key, std::move(value), bytes});
    index_[key] = order_.begin();
    used_ += bytes;
  }

  void clear() {
    std::lock_guard lock(mu_);
    order_.clear();
    index_.clear();
    used_ = 0;
  }

  std::size_t capacity() const { return capacity_; }
  std::size_t bytes_used() const {
    std::lock_guard lock(mu_);
    return used_;
  }
  std::size_t entries() const {
    std::lock_guard lock(mu_);
    return order_.size();
  }
  std::size_t hits() const {
    std::lock_guard lock(mu_);
    return hits_;
  }
  std::size_t misses() const {
    std::lock_guard lock(mu_);
    return misses_;
  }
  std::size_t evictions() const {
    std::lock_guard lock(mu_);
    return evictions_;
  }

 private:
  struct Entry {
    std::string key;
    std::shared_ptr<const void> value;
    std::size_t bytes;
  };

  mutable std::mutex mu_;
  std::size_t capacity_;
  std::size_t used_ = 0;
  std::size_t hits_ = 0, misses_ = 0, evictions_ = 0;
  std::list<Entry> order_;
  std::unordered_map<std::string, std::list<Entry>::iterator> index_;
};

struct DatabaseEntry {
  std::string id;
  std::string path;  // empty for in-memory databases
  std::string hash;  // content hash, part of every cache key
  std::shared_ptr<const AnalysisDatabase> db;
  ValidationReport report;
};

struct StageTimings {
  double ground_set_s = 0.0;
  double kernel_s = 0.0;  // 0 when the kernel came from the cache or is not needed
  double optimize_s = 0.0;
  double total_s = 0.0;
  bool ground_set_cached = false;
  bool kernel_cached = false;
};

struct SummaryOutcome {
  std::shared_ptr<const GroundSet> ground_set;
  SummaryResult result;
  std::vector<TimeRange> cut_list;
  StageTimings timings;
};

struct EngineOptions {
  std::size_t cache_bytes = std::size_t{1} << 30;
};

namespace detail {

inline std::string hex_hash(std::string_view text) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016zx", std::hash<std::string_view>{}(text));
  return buf;
}

inline std::size_t approx_bytes(const GroundSet& gs) {
  std::size_t bytes = sizeof(GroundSet);
  for (std::size_t i = 0; i < gs.size(); ++i) {
    bytes += sizeof(Item) + sizeof(ItemView) + gs.items[i].source_frames.size() * sizeof(std::size_t);
    for (const auto& [name, v] : gs.views[i].features) bytes += name.size() + v.size() * sizeof(double) + 64;
    for (const auto& [name, l] : gs.views[i].labels) bytes += name.size() + l.size() * sizeof(LabelScore) + 64;
    bytes += gs.views[i].hist.size() * sizeof(double);
  }
  return bytes;
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline std::string label_name(const AnalysisDatabase& db, const std::string& vocab, int id) {
  const auto it = db.vocabularies.find(vocab);
  if (it != db.vocabularies.end() && id >= 0 && static_cast<std::size_t>(id) < it->second.size()) {
    return it->second[static_cast<std::size_t>(id)];
  }
  return std::to_string(id);
}

// Highest-probability label, smallest id on ties.
inline const LabelScore* top_label(const std::vector<LabelScore>& list) {
  const LabelScore* best = nullptr;
  for (const LabelScore& l : list) {
    if (!best || l.p > best->p || (l.p == best->p && l.id < best->id)) best = &l;
  }
  return best;
}

}  // namespace detail

inline constexpr std::size_t kStatsTimeBins = 10;

// Entity and label counts plus time distributions.
//   labels[vocab][name]          frames whose top label in vocab is name;
//                                sums to labeled_frames[vocab]
//   above_threshold[vocab][name] frames carrying name with p >= 0.5
//   entity_labels[kind][vocab]   top-label histogram over entities of kind
inline nlohmann::json database_stats(const AnalysisDatabase& db) {
  using nlohmann::json;
  json out;
  out["video"] = {{"duration_s", db.video.duration_s}, {"fps", db.video.fps}};
  out["frames"] = db.frames.size();
  out["shots"] = db.shots ? db.shots->size() : 0;
  out["subtitles"] = db.subtitles ? db.subtitles->size() : 0;

  json entities = json::object();
  for (EntityKind kind : {EntityKind::object, EntityKind::face, EntityKind::human, EntityKind::scene}) {
    entities[std::string(to_string(kind))] = 0;
  }
  for (const EntityRecord& e : db.entities) {
    auto& count = entities[std::string(to_string(e.kind))];
    count = count.get<std::size_t>() + 1;
  }
  out["entities"] = entities;

  std::map<std::string, std::map<std::string, std::size_t>> top, above;
  std::map<std::string, std::size_t> labeled;
  for (const FrameRecord& f : db.frames) {
    for (const auto& [vocab, list] : f.labels) {
      const LabelScore* best = detail::top_label(list);
      if (!best) continue;
      ++labeled[vocab];
      ++top[vocab][detail::label_name(db, vocab, best->id)];
      for (const LabelScore& l : list) {
        if (l.p >= kDefaultQueryThreshold) ++above[vocab][detail::label_name(db, vocab, l.id)];
      }
    }
  }
  out["labels"] = top;
  out["labeled_frames"] = labeled;
  out["above_threshold"] = above;

  std::map<std::string, std::map<std::string, std::map<std::string, std::size_t>>> entity_labels;
  for (const EntityRecord& e : db.entities) {
    for (const auto& [vocab, list] : e.labels) {
      if (const LabelScore* best = detail::top_label(list)) {
        ++entity_labels[std::string(to_string(e.kind))][vocab][detail::label_name(db, vocab, best->id)];
      }
    }
  }
  out["entity_labels"] = entity_labels;

  const double width = db.video.duration_s / static_cast<double>(kStatsTimeBins);
  auto bin_of = [&](double t) {
    const auto b = static_cast<std::size_t>(t / width);
    return std::min(b, kStatsTimeBins - 1);
  };
  std::vector<std::size_t> frame_bins(kStatsTimeBins, 0);
  for (const FrameRecord& f : db.frames) ++frame_bins[bin_of(f.t)];
  std::map<std::string, std::vector<std::size_t>> entity_bins;
  for (const EntityRecord& e : db.entities) {
    auto& bins = entity_bins[std::string(to_string(e.kind))];
    if (bins.empty()) bins.assign(kStatsTimeBins, 0);
    ++bins[bin_of(db.frames.at(e.frame).t)];
  }
  out["time_bins"] = {{"bin_s", width}, {"frames", frame_bins}, {"entities", entity_bins}};
  return out;
}

class Engine {
 public:
  explicit Engine(EngineOptions options = {}) : cache_(options.cache_bytes) {}

  DatabaseEntry add_database_file(const std::string& id, const std::string& path) {
    const std::string text = read_file(path);
    DatabaseEntry entry;
    entry.id = id;
    entry.path = path;
    entry.hash = detail::hex_hash(text);
    entry.db = std::make_shared<const AnalysisDatabase>(parse_database(text, &entry.report));
    return insert(std::move(entry));
  }

  DatabaseEntry add_database(const std::string& id, AnalysisDatabase db) {
    DatabaseEntry entry;
    entry.id = id;
    entry.report = validate(db);
    const std::string text = dump_database(db);
    entry.hash = detail::hex_hash(text);
    entry.db = std::make_shared<const AnalysisDatabase>(std::move(db));
    return insert(std::move(entry));
  }

  std::vector<DatabaseEntry> databases() const {
    std::shared_lock lock(mu_);
    std::vector<DatabaseEntry> out;
    for (const auto& [id, entry] : dbs_) out.push_back(entry);
    return out;
  }

  DatabaseEntry database(const std::string& id) const {
    std::shared_lock lock(mu_);
    const auto it = dbs_.find(id);
    if (it == dbs_.end()) throw NotFound("unknown database '" + id + "'");
    return it->second;
  }

  nlohmann::json stats(const std::string& id) const { return database_stats(*database(id).db); }

  LruCache& cache() { return cache_; }

  SummaryOutcome run(const std::string& id, const SummaryRequest& req) {
    req.check();
    const auto start = std::chrono::steady_clock::now();
    const DatabaseEntry entry = database(id);
    SummaryOutcome out;

    auto t0 = std::chrono::steady_clock::now();
    const std::string gs_key = ground_set_key(entry, req);
    out.ground_set = cache_.get<GroundSet>(gs_key);
    out.timings.ground_set_cached = out.ground_set != nullptr;
    if (!out.ground_set) {
      auto gs = std::make_shared<const GroundSet>(build_ground_set(*entry.db, req));
      cache_.put<GroundSet>(gs_key, gs, detail::approx_bytes(*gs));
      out.ground_set = std::move(gs);
    }
    out.timings.ground_set_s = detail::seconds_since(t0);
    const GroundSet& gs = *out.ground_set;

    std::shared_ptr<const SimilarityKernel> kernel;
    if (req.function.uses_kernel()) {
      t0 = std::chrono::steady_clock::now();
      const KernelRecipe recipe = req.kernel ? KernelRecipe::parse(*req.kernel) : default_recipe(gs);
      const std::string k_key =
          gs_key + "|kernel=" + recipe.to_string() + "|knn=" + (req.knn ? std::to_string(*req.knn) : "-");
      kernel = cache_.get<SimilarityKernel>(k_key);
      out.timings.kernel_cached = kernel != nullptr;
      if (!kernel) {
        kernel = std::make_shared<const SimilarityKernel>(build_kernel(gs, recipe, req.knn));
        cache_.put<SimilarityKernel>(k_key, kernel, kernel->memory_bytes());
        out.timings.kernel_s = detail::seconds_since(t0);
      }
    }

    t0 = std::chrono::steady_clock::now();
    Objective objective = make_objective(req.function, gs, kernel);
    const std::vector<double> costs = gs.costs();
    GreedyOptions opts;
    opts.verify = req.verify;
    out.result = std::visit([&](auto& f) { return maximize(f, req.constraint, costs, req.lazy, opts); }, objective);
    out.timings.optimize_s = detail::seconds_since(t0);
    out.cut_list = make_cut_list(gs, out.result.selected);
    out.timings.total_s = detail::seconds_since(start);
    return out;
  }

  nlohmann::json summarize(const std::string& id, const SummaryRequest& req) {
    const SummaryOutcome out = run(id, req);
    return to_response(*database(id).db, req, out);
  }

  static nlohmann::json to_response(const AnalysisDatabase& db, const SummaryRequest& req,
                                    const SummaryOutcome& out) {
    using nlohmann::json;
    const GroundSet& gs = *out.ground_set;
    const SummaryResult& r = out.result;
    json j;
    j["request"] = req.to_json();
    j["ground_set"] = {{"kind", std::string(to_string(gs.kind))},
                       {"size", gs.size()},
                       {"total_cost", gs.total_cost()}};
    std::vector<std::size_t> selected;
    json items = json::array();
    for (std::size_t id : r.selected) {
      const Item& item = gs.items[id];
      selected.push_back(gs.origin[id]);
      json ji = {{"id", gs.origin[id]},
                 {"start_s", item.time_range.start_s},
                 {"end_s", item.time_range.end_s},
                 {"cost", item.cost},
                 {"frames", item.source_frames}};
      if (item.entity_ref) ji["entity"] = *item.entity_ref;
      items.push_back(std::move(ji));
    }
    j["selected"] = selected;
    j["items"] = std::move(items);
    j["gains"] = r.gains;
    j["objective_value"] = r.objective_value;
    j["cost_used"] = r.cost_used;
    j["resort_count"] = r.resort_count;
    j["gain_evaluations"] = r.gain_evaluations;
    j["short"] = r.short_result;
    j["singleton_fallback"] = r.singleton_fallback;
    json cuts = json::array();
    for (const TimeRange& c : out.cut_list) cuts.push_back({c.start_s, c.end_s});
    j["cut_list"] = std::move(cuts);
    j["cut_length_s"] = cut_list_length(out.cut_list);

    if (gs.kind == GroundSetKind::keyframe) {
      std::vector<std::size_t> frames;
      for (std::size_t id : r.selected) frames.push_back(gs.items[id].source_frames.front());
      j["keyframes"] = frames;
    } else if (gs.kind == GroundSetKind::entity) {
      json ents = json::array();
      for (std::size_t id : r.selected) {
        const Item& item = gs.items[id];
        const EntityRecord& e = db.entities.at(*item.entity_ref);
        json je = {{"entity", *item.entity_ref}, {"frame", e.frame}, {"t", db.frames.at(e.frame).t}};
        if (e.bbox) je["bbox"] = {e.bbox->x, e.bbox->y, e.bbox->w, e.bbox->h};
        ents.push_back(std::move(je));
      }
      j["entities"] = std::move(ents);
    }
    if (req.include_timings) {
      j["timings"] = {{"ground_set_s", out.timings.ground_set_s},
                      {"kernel_s", out.timings.kernel_s},
                      {"optimize_s", out.timings.optimize_s},
                      {"total_s", out.timings.total_s},
                      {"ground_set_cached", out.timings.ground_set_cached},
                      {"kernel_cached", out.timings.kernel_cached}};
    }
    return j;
  }

  static GroundSet build_ground_set(const AnalysisDatabase& db, const SummaryRequest& req) {
    GroundSet gs;
    switch (req.mode) {
      case SummaryMode::keyframes: gs = build_keyframe_groundset(db); break;
      case SummaryMode::skim: gs = build_snippet_groundset(db, SnippetMode::parse(req.snippets)); break;
      case SummaryMode::entities: gs = build_entity_groundset(db, *req.entity); break;
    }
    if (req.window) gs = filter_by_time(gs, req.window->start_s, req.window->end_s);
    if (req.query) gs = filter_by_query(gs, db, parse_query(*req.query, &db));
    return gs;
  }

 private:
  DatabaseEntry insert(DatabaseEntry entry) {
    std::unique_lock lock(mu_);
    dbs_[entry.id] = entry;
    return entry;
  }

  static std::string ground_set_key(const DatabaseEntry& entry, const SummaryRequest& req) {
    std::ostringstream key;
    key.precision(17);
    key << "gs|" << entry.hash << "|" << to_string(req.mode);
    if (req.entity) key << "|entity=" << to_string(*req.entity);
    if (req.mode == SummaryMode::skim) key << "|snippets=" << SnippetMode::parse(req.snippets).to_string();
    if (req.window) key << "|window=" << req.window->start_s << "," << req.window->end_s;
    if (req.query) key << "|query=" << to_string(parse_query(*req.query, entry.db.get()));
    return key.str();
  }

  mutable std::shared_mutex mu_;
  std::map<std::string, DatabaseEntry> dbs_;
  LruCache cache_;
};

}  // namespace vsumm
