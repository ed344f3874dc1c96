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

#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "vsumm/error.hpp"
#include "vsumm/functions/disparity_min.hpp"
#include "vsumm/functions/facility_location.hpp"
#include "vsumm/functions/feature_based.hpp"
#include "vsumm/functions/set_cover.hpp"

namespace vsumm {

enum class FunctionKind { facility_location, feature_based, set_cover, prob_set_cover, disparity_min };

// Objective selector as written on the command line: fl, fb[:psi], sc, psc, dm.
struct FunctionSpec {
  FunctionKind kind = FunctionKind::facility_location;
  Concave psi = Concave::sqrt;

  bool operator==(const FunctionSpec&) const = default;

  static FunctionSpec parse(std::string_view text) {
    if (text == "fl") return {FunctionKind::facility_location};
    if (text == "sc") return {FunctionKind::set_cover};
    if (text == "psc") return {FunctionKind::prob_set_cover};
    if (text == "dm") return {FunctionKind::disparity_min};
    if (text == "fb") return {FunctionKind::feature_based, Concave::sqrt};
    if (text.starts_with("fb:")) {
      if (const auto psi = parse_concave(text.substr(3))) return {FunctionKind::feature_based, *psi};
    }
    throw InvalidArgument("unknown function '" + std::string(text) +
                          "' (expected fl, fb:sqrt, fb:log, fb:ratio, fb:identity, sc, psc or dm)");
  }

  std::string name() const {
    switch (kind) {
      case FunctionKind::facility_location: return "fl";
      case FunctionKind::feature_based: return "fb:" + std::string(to_string(psi));
      case FunctionKind::set_cover: return "sc";
      case FunctionKind::prob_set_cover: return "psc";
      case FunctionKind::disparity_min: return "dm";
    }
    return "fl";
  }

  bool monotone_submodular() const { return kind != FunctionKind::disparity_min; }
  bool uses_kernel() const {
    return kind == FunctionKind::facility_location || kind == FunctionKind::disparity_min;
  }
};

using Objective = std::variant<FacilityLocation, FeatureBased, SetCover, ProbabilisticSetCover, DisparityMin>;

}  // namespace vsumm
