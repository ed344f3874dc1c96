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

// Binds an objective to a ground set: feature matrices for the
// feature-based function and concept universes for the two cover functions.
//
//   frames, snippets   features scene+object   concepts scene, object
//   face entities      features face           concepts face, face_attr
//   scene entities     features scene          concepts scene x color
//   object, human      features object         concepts object x color
//
// A cross-product concept (a, b) has probability p_a * p_b.

#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "vsumm/error.hpp"
#include "vsumm/functions/objective.hpp"
#include "vsumm/ground_set.hpp"
#include "vsumm/kernel.hpp"

namespace vsumm {

// Set cover keeps concepts with probability at or above this value.
inline constexpr double kConceptThreshold = 0.5;

struct ConceptSpace {
  std::vector<std::string> names;                        // concept id -> "vocab:label[*vocab:label]"
  std::vector<std::vector<ConceptProbability>> probs;    // per item, sorted by concept id

  std::size_t universe() const { return names.size(); }
};

struct ConceptRecipe {
  std::vector<std::string> vocabularies;  // independent concept families
  bool cross = false;                     // vocabularies[0] x vocabularies[1]
};

inline std::vector<std::string> feature_groups_for(const GroundSet& gs) {
  if (gs.kind != GroundSetKind::entity) return {"scene", "object"};
  switch (gs.entity_kind.value_or(EntityKind::object)) {
    case EntityKind::face: return {"face"};
    case EntityKind::scene: return {"scene"};
    case EntityKind::object:
    case EntityKind::human: return {"object"};
  }
  return {"object"};
}

inline ConceptRecipe concept_recipe_for(const GroundSet& gs) {
  if (gs.kind != GroundSetKind::entity) return {{"scene", "object"}, false};
  switch (gs.entity_kind.value_or(EntityKind::object)) {
    case EntityKind::face: return {{"face", "face_attr"}, false};
    case EntityKind::scene: return {{"scene", "color"}, true};
    case EntityKind::object:
    case EntityKind::human: return {{"object", "color"}, true};
  }
  return {{"object", "color"}, true};
}

// Concatenated feature groups with negative entries clamped to 0. Items
// missing a group contribute zeros for it.
inline std::pair<std::vector<double>, std::size_t> feature_matrix(const GroundSet& gs,
                                                                  const std::vector<std::string>& groups) {
  std::vector<std::size_t> dims(groups.size(), 0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (const ItemView& v : gs.views) {
      const auto it = v.features.find(groups[g]);
      if (it != v.features.end()) {
        dims[g] = it->second.size();
        break;
      }
    }
  }
  std::size_t dim = 0;
  for (std::size_t d : dims) dim += d;
  if (dim == 0) throw InvalidArgument("ground set has none of the feature groups needed by the objective");
  std::vector<double> out(gs.size() * dim, 0.0);
  for (std::size_t i = 0; i < gs.size(); ++i) {
    std::size_t offset = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto it = gs.views[i].features.find(groups[g]);
      if (it != gs.views[i].features.end()) {
        if (it->second.size() != dims[g]) {
          throw InvalidArgument("feature group '" + groups[g] + "' has inconsistent dimension");
        }
        for (std::size_t d = 0; d < dims[g]; ++d) out[i * dim + offset + d] = std::max(0.0, it->second[d]);
      }
      offset += dims[g];
    }
  }
  return {std::move(out), dim};
}

inline ConceptSpace concept_space(const GroundSet& gs, const ConceptRecipe& recipe) {
  // Concept names are collected first and numbered in sorted order so ids
  // do not depend on item order.
  std::vector<std::map<std::string, double>> per_item(gs.size());
  auto name = [](const std::string& vocab, int id) { return vocab + ":" + std::to_string(id); };
  auto list_of = [](const ItemView& v, const std::string& vocab) -> const std::vector<LabelScore>* {
    const auto it = v.labels.find(vocab);
    return it == v.labels.end() || it->second.empty() ? nullptr : &it->second;
  };
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const ItemView& v = gs.views[i];
    auto& concepts = per_item[i];
    if (recipe.cross && recipe.vocabularies.size() == 2) {
      const auto* a = list_of(v, recipe.vocabularies[0]);
      const auto* b = list_of(v, recipe.vocabularies[1]);
      if (a && b) {
        for (const LabelScore& la : *a) {
          for (const LabelScore& lb : *b) {
            concepts[name(recipe.vocabularies[0], la.id) + "*" + name(recipe.vocabularies[1], lb.id)] = la.p * lb.p;
          }
        }
      } else if (a) {
        for (const LabelScore& la : *a) concepts[name(recipe.vocabularies[0], la.id)] = la.p;
      }
    } else {
      for (const std::string& vocab : recipe.vocabularies) {
        if (const auto* list = list_of(v, vocab)) {
          for (const LabelScore& l : *list) concepts[name(vocab, l.id)] = l.p;
        }
      }
    }
  }
  std::map<std::string, std::size_t> ids;
  for (const auto& concepts : per_item) {
    for (const auto& [n, p] : concepts) ids.emplace(n, 0);
  }
  ConceptSpace space;
  for (auto& [n, id] : ids) {
    id = space.names.size();
    space.names.push_back(n);
  }
  space.probs.resize(gs.size());
  for (std::size_t i = 0; i < gs.size(); ++i) {
    for (const auto& [n, p] : per_item[i]) space.probs[i].push_back({ids.at(n), p});
    std::sort(space.probs[i].begin(), space.probs[i].end(),
              [](const ConceptProbability& a, const ConceptProbability& b) { return a.concept_id < b.concept_id; });
  }
  return space;
}

inline SetCover make_set_cover(const ConceptSpace& space, double threshold = kConceptThreshold) {
  std::vector<std::vector<std::size_t>> concepts(space.probs.size());
  for (std::size_t i = 0; i < space.probs.size(); ++i) {
    for (const auto& [u, p] : space.probs[i]) {
      if (p >= threshold) concepts[i].push_back(u);
    }
  }
  return SetCover(std::move(concepts), space.universe());
}

inline ProbabilisticSetCover make_prob_set_cover(const ConceptSpace& space) {
  return ProbabilisticSetCover(space.probs, space.universe());
}

// kernel may be null unless the function needs one.
inline Objective make_objective(const FunctionSpec& spec, const GroundSet& gs,
                                std::shared_ptr<const SimilarityKernel> kernel) {
  if (gs.empty()) throw InvalidArgument("cannot build an objective on an empty ground set");
  if (spec.uses_kernel()) {
    if (!kernel) throw InvalidArgument(spec.name() + " needs a similarity kernel");
    if (kernel->size() != gs.size()) throw InvalidArgument("kernel size does not match the ground set");
  }
  switch (spec.kind) {
    case FunctionKind::facility_location: return FacilityLocation(std::move(kernel));
    case FunctionKind::disparity_min: return DisparityMin(std::move(kernel));
    case FunctionKind::feature_based: {
      auto [features, dim] = feature_matrix(gs, feature_groups_for(gs));
      return FeatureBased(std::move(features), dim, spec.psi);
    }
    case FunctionKind::set_cover: return make_set_cover(concept_space(gs, concept_recipe_for(gs)));
    case FunctionKind::prob_set_cover: return make_prob_set_cover(concept_space(gs, concept_recipe_for(gs)));
  }
  throw InvalidArgument("unsupported function");
}

}  // namespace vsumm
