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

// HTTP routes over an Engine:
//
//   GET  /dbs                     registered databases
//   GET  /dbs/{id}/stats          database_stats()
//   POST /dbs/{id}/summarize      body: SummaryRequest JSON
//   GET  /dbs/{id}/frames/{idx}   <db dir>/frames/<idx>.jpg or .png
//
// Errors are {"error": {"code": ..., "message": ...}} with status 400
// (malformed or incompatible request), 404 (unknown database or frame),
// 422 (query matched nothing) or 500.

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "vsumm/engine.hpp"
#include "vsumm/error.hpp"

namespace vsumm {

namespace detail {

inline void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
  send_json(res, status, {{"error", {{"code", code}, {"message", message}}}});
}

// Runs fn and maps library exceptions to status codes.
template <class Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const NotFound& e) {
    send_error(res, 404, "not_found", e.what());
  } catch (const EmptyQueryResult& e) {
    send_error(res, 422, "empty_query", e.what());
  } catch (const nlohmann::json::exception& e) {
    send_error(res, 400, "malformed_request", e.what());
  } catch (const ParseError& e) {
    send_error(res, 400, "malformed_request", e.what());
  } catch (const InvalidArgument& e) {
    send_error(res, 400, "invalid_request", e.what());
  } catch (const ValidationError& e) {
    send_error(res, 400, "invalid_request", e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "internal", e.what());
  }
}

}  // namespace detail

inline void install_routes(httplib::Server& server, Engine& engine) {
  server.Get("/dbs", [&engine](const httplib::Request&, httplib::Response& res) {
    detail::guarded(res, [&] {
      nlohmann::json list = nlohmann::json::array();
      for (const DatabaseEntry& e : engine.databases()) {
        list.push_back({{"id", e.id},
                        {"path", e.path},
                        {"hash", e.hash},
                        {"frames", e.db->frames.size()},
                        {"entities", e.db->entities.size()},
                        {"duration_s", e.db->video.duration_s},
                        {"fps", e.db->video.fps}});
      }
      detail::send_json(res, 200, {{"dbs", list}});
    });
  });

  server.Get(R"(/dbs/([^/]+)/stats)", [&engine](const httplib::Request& req, httplib::Response& res) {
    detail::guarded(res, [&] { detail::send_json(res, 200, engine.stats(req.matches[1])); });
  });

  server.Post(R"(/dbs/([^/]+)/summarize)", [&engine](const httplib::Request& req, httplib::Response& res) {
    detail::guarded(res, [&] {
      const std::string id = req.matches[1];
      engine.database(id);  // 404 before parsing the body
      nlohmann::json body;
      try {
        body = nlohmann::json::parse(req.body);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("request body is not valid JSON: ") + e.what());
      }
      const SummaryRequest request = SummaryRequest::from_json(body);
      detail::send_json(res, 200, engine.summarize(id, request));
    });
  });

  server.Get(R"(/dbs/([^/]+)/frames/(\d+))", [&engine](const httplib::Request& req, httplib::Response& res) {
    detail::guarded(res, [&] {
      const DatabaseEntry entry = engine.database(req.matches[1]);
      const std::string idx = req.matches[2];
      if (std::stoull(idx) >= entry.db->frames.size()) throw NotFound("frame " + idx + " out of range");
      if (entry.path.empty()) throw NotFound("database has no directory");
      const auto dir = std::filesystem::path(entry.path).parent_path() / "frames";
      for (const auto& [ext, mime] : {std::pair{".jpg", "image/jpeg"}, std::pair{".png", "image/png"}}) {
        const auto file = dir / (idx + ext);
        if (!std::filesystem::exists(file)) continue;
        std::ifstream in(file, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        res.status = 200;
        res.set_content(buf.str(), mime);
        return;
      }
      throw NotFound("no thumbnail for frame " + idx);
    });
  });
}

}  // namespace vsumm
