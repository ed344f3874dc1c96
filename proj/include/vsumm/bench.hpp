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

// Timing table: every function on a synthetic keyframe ground set of n
// frames, at summary sizes given as fractions of n.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsumm/functions/objective.hpp"
#include "vsumm/ground_set.hpp"
#include "vsumm/instantiate.hpp"
#include "vsumm/kernel.hpp"
#include "vsumm/optimize.hpp"
#include "vsumm/synthetic.hpp"

namespace vsumm {

struct BenchOptions {
  std::size_t n = 7200;  // two hours at one frame per second
  int dim = 128;
  int clusters = 24;
  std::vector<double> fractions{0.01, 0.02, 0.05};
  std::vector<std::string> functions{"fl", "fb:sqrt", "fb:log", "fb:ratio", "sc", "psc", "dm"};
  bool lazy = true;
  std::uint64_t seed = 1;
};

struct BenchRow {
  std::string function;
  std::size_t n = 0;
  std::size_t k = 0;
  double kernel_s = 0.0;    // kernel build, shared by fl and dm rows
  double setup_s = 0.0;     // objective construction
  double optimize_s = 0.0;  // greedy run
  std::size_t resort_count = 0;
  std::size_t gain_evaluations = 0;
  double objective = 0.0;
};

inline SyntheticSpec bench_spec(std::size_t n, int dim, int clusters, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.duration_s = static_cast<double>(n);
  spec.fps = 1.0;
  spec.dim = dim;
  spec.clusters = clusters;
  spec.segments_per_cluster = 4;
  spec.outliers = static_cast<int>(n / 100);
  spec.subtitles = false;
  spec.seed = seed;
  return spec;
}

inline std::vector<BenchRow> run_bench(const BenchOptions& opts,
                                       const std::function<void(const BenchRow&)>& progress = {}) {
  using clock = std::chrono::steady_clock;
  auto since = [](clock::time_point t) { return std::chrono::duration<double>(clock::now() - t).count(); };

  const AnalysisDatabase db = generate_synthetic(bench_spec(opts.n, opts.dim, opts.clusters, opts.seed));
  const GroundSet gs = build_keyframe_groundset(db);

  std::shared_ptr<const SimilarityKernel> kernel;
  double kernel_s = 0.0;
  auto need_kernel = [&] {
    if (kernel) return;
    const auto t = clock::now();
    kernel = std::make_shared<const SimilarityKernel>(build_kernel(gs, default_recipe(gs)));
    kernel_s = since(t);
  };

  std::vector<BenchRow> rows;
  for (const std::string& name : opts.functions) {
    const FunctionSpec spec = FunctionSpec::parse(name);
    if (spec.uses_kernel()) need_kernel();
    for (double fraction : opts.fractions) {
      BenchRow row;
      row.function = spec.name();
      row.n = gs.size();
      row.k = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(row.n))));
      row.kernel_s = spec.uses_kernel() ? kernel_s : 0.0;
      auto t = clock::now();
      Objective objective = make_objective(spec, gs, spec.uses_kernel() ? kernel : nullptr);
      row.setup_s = since(t);
      t = clock::now();
      const SummaryResult r =
          std::visit([&](auto& f) { return maximize(f, Cardinality{row.k}, {}, opts.lazy); }, objective);
      row.optimize_s = since(t);
      row.resort_count = r.resort_count;
      row.gain_evaluations = r.gain_evaluations;
      row.objective = r.objective_value;
      if (progress) progress(row);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline nlohmann::json bench_to_json(const std::vector<BenchRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const BenchRow& r : rows) {
    out.push_back({{"function", r.function},
                   {"n", r.n},
                   {"k", r.k},
                   {"kernel_s", r.kernel_s},
                   {"setup_s", r.setup_s},
                   {"optimize_s", r.optimize_s},
                   {"resort_count", r.resort_count},
                   {"gain_evaluations", r.gain_evaluations},
                   {"objective", r.objective}});
  }
  return out;
}

inline std::string bench_to_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os.precision(10);
  os << "function,n,k,kernel_s,setup_s,optimize_s,resort_count,gain_evaluations,objective\n";
  for (const BenchRow& r : rows) {
    os << r.function << ',' << r.n << ',' << r.k << ',' << r.kernel_s << ',' << r.setup_s << ',' << r.optimize_s
       << ',' << r.resort_count << ',' << r.gain_evaluations << ',' << r.objective << '\n';
  }
  return os.str();
}

}  // namespace vsumm
