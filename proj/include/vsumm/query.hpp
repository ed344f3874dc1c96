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

// Label queries over the analysis database.
//
// Grammar:   query  := clause ('|' clause)*
//            clause := term ('&' term)*
//            term   := vocab ':' label ('>=' tau)?
// A label is an integer id or a name from the database's vocabularies.
// tau defaults to 0.5. A frame (or entity) satisfies a clause when every
// term holds for it; an item matches when at least one of its source frames
// satisfies at least one clause.

#pragma once

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "vsumm/analysis_db.hpp"
#include "vsumm/error.hpp"
#include "vsumm/ground_set.hpp"
#include "vsumm/strings.hpp"

namespace vsumm {

inline constexpr double kDefaultQueryThreshold = 0.5;

struct QueryTerm {
  std::string vocab;
  int label = 0;
  double min_p = kDefaultQueryThreshold;

  bool operator==(const QueryTerm&) const = default;
};

struct Query {
  // Disjunction of conjunctions.
  std::vector<std::vector<QueryTerm>> clauses;

  bool operator==(const Query&) const = default;

  // Union of two queries: an item matches either.
  friend Query operator|(Query a, const Query& b) {
    a.clauses.insert(a.clauses.end(), b.clauses.begin(), b.clauses.end());
    return a;
  }
};

namespace detail {

inline bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  const std::string str(s);
  char* end = nullptr;
  const long v = std::strtol(str.c_str(), &end, 10);
  if (*end != '\0' || v < 0 || v > 1'000'000'000) return false;
  out = static_cast<int>(v);
  return true;
}

inline int resolve_label(std::string_view vocab, std::string_view label, const AnalysisDatabase* db) {
  int id = 0;
  if (parse_int(label, id)) return id;
  if (db) {
    const auto it = db->vocabularies.find(std::string(vocab));
    if (it != db->vocabularies.end()) {
      const auto& names = it->second;
      const auto pos = std::find(names.begin(), names.end(), label);
      if (pos != names.end()) return static_cast<int>(pos - names.begin());
    }
  }
  throw InvalidArgument("unknown label '" + std::string(label) + "' in vocabulary '" +
                        std::string(vocab) + "'");
}

inline QueryTerm parse_term(std::string_view text, const AnalysisDatabase* db) {
  text = trim(text);
  QueryTerm term;
  std::string_view body = text;
  if (const auto ge = text.find(">="); ge != std::string_view::npos) {
    const std::string tau(trim(text.substr(ge + 2)));
    char* end = nullptr;
    term.min_p = std::strtod(tau.c_str(), &end);
    if (tau.empty() || *end != '\0') throw InvalidArgument("bad threshold in query term '" + std::string(text) + "'");
    if (!(term.min_p >= 0.0 && term.min_p <= 1.0)) {
      throw InvalidArgument("query threshold must lie in [0,1]: '" + std::string(text) + "'");
    }
    body = trim(text.substr(0, ge));
  }
  const auto colon = body.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == body.size()) {
    throw InvalidArgument("query term must look like vocab:label[>=tau], got '" + std::string(text) + "'");
  }
  term.vocab = std::string(trim(body.substr(0, colon)));
  term.label = resolve_label(term.vocab, trim(body.substr(colon + 1)), db);
  return term;
}

}  // namespace detail

// Label names are resolved through db's vocabularies when db is given.
inline Query parse_query(std::string_view text, const AnalysisDatabase* db = nullptr) {
  if (detail::trim(text).empty()) throw InvalidArgument("empty query");
  Query q;
  for (std::string_view group : detail::split(text, '|')) {
    std::vector<QueryTerm> clause;
    for (std::string_view term : detail::split(group, '&')) {
      clause.push_back(detail::parse_term(term, db));
    }
    q.clauses.push_back(std::move(clause));
  }
  return q;
}

inline std::string to_string(const Query& q) {
  std::string out;
  for (std::size_t c = 0; c < q.clauses.size(); ++c) {
    if (c) out += " | ";
    for (std::size_t t = 0; t < q.clauses[c].size(); ++t) {
      const QueryTerm& term = q.clauses[c][t];
      if (t) out += " & ";
      char tau[32];
      const auto end = std::to_chars(tau, tau + sizeof(tau), term.min_p).ptr;
      out += term.vocab + ":" + std::to_string(term.label) + ">=" + std::string(tau, end);
    }
  }
  return out;
}

inline bool satisfies(const LabelMap& labels, const QueryTerm& term) {
  const auto it = labels.find(term.vocab);
  if (it == labels.end()) return false;
  return std::any_of(it->second.begin(), it->second.end(), [&](const LabelScore& l) {
    return l.id == term.label && l.p >= term.min_p;
  });
}

inline bool matches(const LabelMap& labels, const Query& q) {
  return std::any_of(q.clauses.begin(), q.clauses.end(), [&](const auto& clause) {
    return std::all_of(clause.begin(), clause.end(),
                       [&](const QueryTerm& term) { return satisfies(labels, term); });
  });
}

// V_q: the items relevant to q. Throws EmptyQueryResult when nothing
// matches.
inline GroundSet filter_by_query(const GroundSet& gs, const AnalysisDatabase& db, const Query& q) {
  GroundSet out = subset(gs, [&](std::size_t i) {
    const Item& item = gs.items[i];
    if (item.entity_ref) return matches(db.entities.at(*item.entity_ref).labels, q);
    return std::any_of(item.source_frames.begin(), item.source_frames.end(),
                       [&](std::size_t f) { return matches(db.frames.at(f).labels, q); });
  });
  if (out.empty()) throw EmptyQueryResult("query matched no items");
  return out;
}

}  // namespace vsumm
