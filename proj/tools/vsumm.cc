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

// vsumm command line: gen, stats, summarize, query, bench, serve.
//
// Exit status: 0 success, 1 runtime failure, 2 bad arguments or input,
// 3 query matched nothing.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vsumm/http.hpp"
#include "vsumm/vsumm.hpp"

namespace {

struct SummarizeFlags {
  std::string db;
  std::string request_file;
  std::string mode = "keyframes";
  std::string entity;
  std::string function = "fl";
  std::optional<std::size_t> k;
  std::optional<double> budget_s;
  std::optional<double> cover;
  std::string snippets = "fixed:2";
  std::string kernel;
  std::optional<std::size_t> knn;
  std::string query;
  std::vector<double> window;
  std::string out = "json";
  bool no_timings = false;
  bool naive = false;
  bool verify = false;
};

void add_summarize_flags(CLI::App* cmd, SummarizeFlags& f, bool query_required) {
  cmd->add_option("--db", f.db, "Analysis database JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--request", f.request_file, "Read the request from a JSON file; other flags are ignored");
  cmd->add_option("--mode", f.mode, "keyframes | skim | entities")
      ->check(CLI::IsMember({"keyframes", "skim", "entities"}));
  cmd->add_option("--entity", f.entity, "Entity kind for entities mode: object | face | human | scene");
  cmd->add_option("--function", f.function, "fl | fb:sqrt | fb:log | fb:ratio | fb:identity | sc | psc | dm");
  auto* k = cmd->add_option("--k", f.k, "Cardinality budget");
  auto* b = cmd->add_option("--budget-s", f.budget_s, "Knapsack budget in seconds");
  auto* c = cmd->add_option("--cover", f.cover, "Cover fraction c in (0, 1]");
  k->excludes(b)->excludes(c);
  b->excludes(c);
  cmd->add_option("--snippets", f.snippets, "fixed:<seconds> | shots | subtitles");
  cmd->add_option("--kernel", f.kernel, "Kernel recipe, e.g. scene:0.4,object:0.4,hist:0.2");
  cmd->add_option("--knn", f.knn, "Sparsify the kernel to k nearest neighbours");
  auto* q = cmd->add_option("--query", f.query, "e.g. 'object:person>=0.6 & color:red | scene:beach'");
  if (query_required) q->required();
  cmd->add_option("--window", f.window, "Restrict to a time window: START END (seconds)")->expected(2);
  cmd->add_option("--out", f.out, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--no-timings", f.no_timings, "Omit timings so output is byte-identical across runs");
  cmd->add_flag("--naive", f.naive, "Plain greedy instead of the lazy priority queue");
  cmd->add_flag("--verify", f.verify, "Check every memoized gain against a from-scratch evaluation");
}

vsumm::SummaryRequest request_from_flags(const SummarizeFlags& f) {
  if (!f.request_file.empty()) {
    return vsumm::SummaryRequest::from_json(nlohmann::json::parse(vsumm::read_file(f.request_file)));
  }
  vsumm::SummaryRequest r;
  r.mode = vsumm::parse_summary_mode(f.mode);
  if (!f.entity.empty()) {
    r.entity = vsumm::parse_entity_kind(f.entity);
    if (!r.entity) throw vsumm::InvalidArgument("unknown entity kind '" + f.entity + "'");
  }
  r.function = vsumm::FunctionSpec::parse(f.function);
  if (f.k) r.constraint = vsumm::Cardinality{*f.k};
  if (f.budget_s) r.constraint = vsumm::Knapsack{*f.budget_s};
  if (f.cover) r.constraint = vsumm::Cover{*f.cover};
  r.snippets = f.snippets;
  if (!f.kernel.empty()) r.kernel = f.kernel;
  r.knn = f.knn;
  if (!f.query.empty()) r.query = f.query;
  if (f.window.size() == 2) r.window = vsumm::TimeRange{f.window[0], f.window[1]};
  r.lazy = !f.naive;
  r.verify = f.verify;
  r.include_timings = !f.no_timings;
  r.check();
  return r;
}

std::string response_csv(const nlohmann::json& response) {
  std::ostringstream os;
  os.precision(17);
  os << "rank,id,start_s,end_s,cost,gain\n";
  const auto& items = response.at("items");
  const auto& gains = response.at("gains");
  for (std::size_t i = 0; i < items.size(); ++i) {
    os << i << ',' << items[i]["id"].get<std::size_t>() << ',' << items[i]["start_s"].get<double>() << ','
       << items[i]["end_s"].get<double>() << ',' << items[i]["cost"].get<double>() << ','
       << gains[i].get<double>() << '\n';
  }
  return os.str();
}

int run_summarize(const SummarizeFlags& f) {
  vsumm::Engine engine;
  engine.add_database_file("cli", f.db);
  const vsumm::SummaryRequest request = request_from_flags(f);
  const nlohmann::json response = engine.summarize("cli", request);
  if (f.out == "csv") {
    std::cout << response_csv(response);
  } else {
    std::cout << response.dump(2) << "\n";
  }
  return 0;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// "id=path" or a bare path whose file stem becomes the id.
std::pair<std::string, std::string> split_db_arg(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq != std::string::npos) return {arg.substr(0, eq), arg.substr(eq + 1)};
  return {std::filesystem::path(arg).stem().string(), arg};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Submodular video and image summarization"};
  app.require_subcommand(1);

  vsumm::SyntheticSpec gen;
  std::string gen_out;
  bool no_subtitles = false;
  auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic analysis database");
  gen_cmd->add_option("--out", gen_out, "Output file")->required();
  gen_cmd->add_option("--duration", gen.duration_s, "Seconds");
  gen_cmd->add_option("--fps", gen.fps, "Sampled frames per second");
  gen_cmd->add_option("--clusters", gen.clusters, "Latent clusters");
  gen_cmd->add_option("--segments", gen.segments_per_cluster, "Contiguous segments per cluster");
  gen_cmd->add_option("--dim", gen.dim, "Feature dimension");
  gen_cmd->add_option("--hist-bins", gen.hist_bins, "Colour histogram bins");
  gen_cmd->add_option("--outliers", gen.outliers, "Outlier frames");
  gen_cmd->add_option("--objects", gen.objects, "Object entities");
  gen_cmd->add_option("--faces", gen.faces, "Face entities");
  gen_cmd->add_option("--humans", gen.humans, "Human entities");
  gen_cmd->add_option("--scenes", gen.scenes, "Scene entities");
  gen_cmd->add_option("--identities", gen.identities, "Distinct face/human identities");
  gen_cmd->add_option("--noise", gen.noise, "Feature noise");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_flag("--no-subtitles", no_subtitles, "Omit subtitle boundaries");

  std::string stats_db;
  auto* stats_cmd = app.add_subcommand("stats", "Label and entity statistics");
  stats_cmd->add_option("--db", stats_db, "Analysis database JSON file")->required()->check(CLI::ExistingFile);

  SummarizeFlags sum_flags;
  auto* sum_cmd = app.add_subcommand("summarize", "Compute a summary");
  add_summarize_flags(sum_cmd, sum_flags, false);

  SummarizeFlags query_flags;
  auto* query_cmd = app.add_subcommand("query", "Query-focused summary (summarize with --query)");
  add_summarize_flags(query_cmd, query_flags, true);

  vsumm::BenchOptions bench;
  std::string bench_json, bench_csv;
  bool bench_naive = false;
  auto* bench_cmd = app.add_subcommand("bench", "Timing table on a synthetic video");
  bench_cmd->add_option("--n", bench.n, "Ground set size (frames at 1 fps)");
  bench_cmd->add_option("--dim", bench.dim, "Feature dimension");
  bench_cmd->add_option("--clusters", bench.clusters, "Latent clusters");
  bench_cmd->add_option("--fractions", bench.fractions, "Summary sizes as fractions of n");
  bench_cmd->add_option("--functions", bench.functions, "Functions to time");
  bench_cmd->add_option("--seed", bench.seed, "Random seed");
  bench_cmd->add_option("--json", bench_json, "Write the table as JSON");
  bench_cmd->add_option("--csv", bench_csv, "Write the table as CSV");
  bench_cmd->add_flag("--naive", bench_naive, "Plain greedy");

  std::vector<std::string> serve_dbs;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t cache_mb = 1024;
  auto* serve_cmd = app.add_subcommand("serve", "HTTP service");
  serve_cmd->add_option("--db", serve_dbs, "Database as id=path or path (repeatable)")->required();
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Port");
  serve_cmd->add_option("--cache-mb", cache_mb, "Ground set and kernel cache budget");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) {
      gen.subtitles = !no_subtitles;
      vsumm::save_database(vsumm::generate_synthetic(gen), gen_out);
      return 0;
    }
    if (*stats_cmd) {
      std::cout << vsumm::database_stats(vsumm::load_database(stats_db)).dump(2) << "\n";
      return 0;
    }
    if (*sum_cmd) return run_summarize(sum_flags);
    if (*query_cmd) return run_summarize(query_flags);
    if (*bench_cmd) {
      bench.lazy = !bench_naive;
      const auto rows = vsumm::run_bench(bench, [](const vsumm::BenchRow& r) {
        std::fprintf(stderr, "%-10s n=%zu k=%zu optimize=%.3fs\n", r.function.c_str(), r.n, r.k, r.optimize_s);
      });
      if (!bench_json.empty()) write_text(bench_json, vsumm::bench_to_json(rows).dump(2) + "\n");
      if (!bench_csv.empty()) write_text(bench_csv, vsumm::bench_to_csv(rows));
      if (bench_json.empty() && bench_csv.empty()) std::cout << vsumm::bench_to_csv(rows);
      return 0;
    }
    if (*serve_cmd) {
      vsumm::EngineOptions options;
      options.cache_bytes = cache_mb << 20;
      vsumm::Engine engine(options);
      for (const std::string& arg : serve_dbs) {
        const auto [id, path] = split_db_arg(arg);
        engine.add_database_file(id, path);
      }
      httplib::Server server;
      vsumm::install_routes(server, engine);
      std::fprintf(stderr, "listening on %s:%d\n", host.c_str(), port);
      if (!server.listen(host, port)) {
        std::fprintf(stderr, "error: cannot bind %s:%d\n", host.c_str(), port);
        return 1;
      }
      return 0;
    }
  } catch (const vsumm::EmptyQueryResult& e) {
    std::fprintf(stderr, "no relevant content: %s\n", e.what());
    return 3;
  } catch (const vsumm::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
