// Copyright 2026 The flexsched Authors
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

#include "flexsched/http.hpp"

#include <charconv>

namespace flexsched {
namespace {

constexpr const char* kJson = "application/json; charset=utf-8";

void Send(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), kJson);
}

// Empty bodies read as {}.
bool ParseBody(const httplib::Request& req, httplib::Response& res, Json& out) {
  if (req.body.empty()) {
    out = Json::object();
    return true;
  }
  try {
    out = Json::parse(req.body);
    return true;
  } catch (const nlohmann::json::parse_error& e) {
    Send(res, ErrorResponse(400, "bad-json", e.what()));
    return false;
  }
}

}  // namespace

void RegisterRoutes(httplib::Server& server, PlanService& service) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  server.Post("/plans", [&](const httplib::Request& req, httplib::Response& res) {
    Json body;
    if (ParseBody(req, res, body)) Send(res, service.CreatePlan(body));
  });
  server.Get("/plans", [&](const httplib::Request&, httplib::Response& res) {
    Send(res, service.ListPlans());
  });
  server.Get("/plans/active", [&](const httplib::Request&, httplib::Response& res) {
    Send(res, service.GetActivePlan());
  });
  server.Get(R"(/plans/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    Send(res, service.GetPlan(req.matches[1]));
  });
  server.Get(R"(/plans/([^/]+)/recommendations)",
             [&](const httplib::Request& req, httplib::Response& res) {
               Send(res, service.GetRecommendations(req.matches[1]));
             });
  server.Post(R"(/plans/([^/]+)/recommendations/([^/]+)/ack)",
              [&](const httplib::Request& req, httplib::Response& res) {
                const std::string n = req.matches[2];
                int index = -1;
                auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), index);
                if (ec != std::errc() || ptr != n.data() + n.size()) {
                  Send(res, ErrorResponse(404, "not-found", "recommendation index is not a number"));
                  return;
                }
                Json body;
                if (ParseBody(req, res, body)) {
                  Send(res, service.Acknowledge(req.matches[1], index, body));
                }
              });
  server.Post("/measurements", [&](const httplib::Request& req, httplib::Response& res) {
    Json body;
    if (ParseBody(req, res, body)) Send(res, service.PostMeasurement(body));
  });
  server.Post(R"(/plans/([^/]+)/reoptimize)",
              [&](const httplib::Request& req, httplib::Response& res) {
                Json body;
                if (ParseBody(req, res, body)) {
                  Send(res, service.Reoptimize(req.matches[1], body));
                }
              });
  server.Get(R"(/jobs/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    Send(res, service.GetJob(req.matches[1]));
  });
  server.Get(R"(/plans/([^/]+)/evaluation)",
             [&](const httplib::Request& req, httplib::Response& res) {
               Send(res, service.GetEvaluation(req.matches[1],
                                               req.get_param_value("measurements")));
             });

  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    Send(res, ErrorResponse(res.status, "not-found",
                            "no route for " + req.method + " " + req.path));
  });
  server.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "unknown error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          what = e.what();
        } catch (...) {
        }
        Send(res, ErrorResponse(500, "internal", what));
      });
}

}  // namespace flexsched
