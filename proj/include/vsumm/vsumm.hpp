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

// Umbrella header. The HTTP layer is separate (vsumm/http.hpp) so that
// library users do not pull in the server.

#pragma once

#include "vsumm/analysis_db.hpp"
#include "vsumm/bench.hpp"
#include "vsumm/engine.hpp"
#include "vsumm/error.hpp"
#include "vsumm/functions/disparity_min.hpp"
#include "vsumm/functions/facility_location.hpp"
#include "vsumm/functions/feature_based.hpp"
#include "vsumm/functions/objective.hpp"
#include "vsumm/functions/set_cover.hpp"
#include "vsumm/functions/set_function.hpp"
#include "vsumm/ground_set.hpp"
#include "vsumm/instantiate.hpp"
#include "vsumm/kernel.hpp"
#include "vsumm/optimize.hpp"
#include "vsumm/query.hpp"
#include "vsumm/synthetic.hpp"
