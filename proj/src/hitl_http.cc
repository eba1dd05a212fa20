/*
 * Copyright 2026 The EduKG Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "edukg/hitl_http.h"

#include <functional>
#include <string>
#include <vector>

#include "edukg/graph.h"
#include "httplib.h"
#include "json.hpp"

namespace edukg {
namespace {

using nlohmann::json;

constexpr char kJson[] = "application/json";

json ConceptJson(const Concept& c) {
  json slides = json::array();
  for (const auto& [index, w_slide] : c.slide_weights) {
    slides.push_back({{"index", index},
                      {"w_slide", w_slide},
                      {"importance", c.importance_per_slide.at(index)}});
  }
  return {{"uri", c.uri},
          {"label", c.label},
          {"w_lm", c.w_lm},
          {"slides", std::move(slides)}};
}

json DraftJson(const DraftView& view) {
  return {{"id", view.id},
          {"material_id", view.material_id},
          {"mode", PipelineModeName(view.mode)},
          {"state", DraftStateName(view.state)},
          {"version", view.version},
          {"concept_count", view.concept_count},
          {"error", view.error},
          {"warnings", view.warnings}};
}

json ParseBody(const httplib::Request& req) {
  if (Trim(req.body).empty()) return json::object();
  json body = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
  if (body.is_discarded() || !body.is_object()) {
    throw Error(ErrorCode::kInvalidArgument,
                "request body is not a JSON object");
  }
  return body;
}

uint64_t ExpectedVersion(const httplib::Request& req, const json& body) {
  if (body.contains("expected_version")) {
    if (!body["expected_version"].is_number_unsigned()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "expected_version must be a non-negative integer");
    }
    return body["expected_version"].get<uint64_t>();
  }
  if (req.has_param("expected_version")) {
    try {
      return std::stoull(req.get_param_value("expected_version"));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad expected_version");
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "expected_version is required");
}

int IntParam(const httplib::Request& req, const std::string& name,
             int fallback) {
  if (!req.has_param(name)) return fallback;
  try {
    size_t used = 0;
    const std::string raw = req.get_param_value(name);
    const int value = std::stoi(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(name);
    return value;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, name + " must be an integer");
  }
}

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

// Wraps a handler so domain errors become JSON error responses.
httplib::Server::Handler Guard(
    std::function<void(const httplib::Request&, httplib::Response&)> handler) {
  return [handler = std::move(handler)](const httplib::Request& req,
                                        httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const Error& e) {
      res.status = HttpStatusFor(e.code());
      res.set_content(ErrorBody(e.code(), e.what()), kJson);
    } catch (const json::exception& e) {
      res.status = 400;
      res.set_content(ErrorBody(ErrorCode::kInvalidArgument, e.what()), kJson);
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(
          json{{"error", {{"code", "Internal"}, {"message", e.what()}}}}.dump(),
          kJson);
    }
  };
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownMaterial:
    case ErrorCode::kUnknownSlide:
    case ErrorCode::kUnknownDraft:
    case ErrorCode::kUnknownConcept:
    case ErrorCode::kUnpublishedMaterial:
      return 404;
    case ErrorCode::kVersionConflict:
    case ErrorCode::kConflictActiveDraft:
    case ErrorCode::kDraftImmutable:
    case ErrorCode::kNotReady:
      return 409;
    case ErrorCode::kPipelineFailed:
    case ErrorCode::kUnresolvable:
    case ErrorCode::kBadSlideIndex:
    case ErrorCode::kEmptyMaterial:
    case ErrorCode::kMalformedGlyph:
      return 422;
    case ErrorCode::kServiceUnavailable:
    case ErrorCode::kEmbeddingUnavailable:
      return 503;
    default:
      return 400;
  }
}

std::string ErrorBody(ErrorCode code, std::string_view message) {
  return json{{"error", {{"code", ErrorCodeName(code)}, {"message", message}}}}
      .dump();
}

HitlHttpServer::HitlHttpServer(HitlService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  Routes();
}

HitlHttpServer::~HitlHttpServer() { Stop(); }

int HitlHttpServer::BindToAnyPort(const std::string& host) {
  return server_->bind_to_any_port(host);
}

bool HitlHttpServer::Bind(const std::string& host, int port) {
  return server_->bind_to_port(host, port);
}

bool HitlHttpServer::ListenAfterBind() { return server_->listen_after_bind(); }

void HitlHttpServer::WaitUntilReady() const { server_->wait_until_ready(); }

void HitlHttpServer::Stop() {
  if (server_) server_->stop();
}

void HitlHttpServer::Routes() {
  httplib::Server& s = *server_;

  s.Post("/materials", Guard([this](const auto& req, auto& res) {
           const GlyphDocument document = ParseGlyphDocument(req.body);
           const std::string title =
               req.has_param("title") ? req.get_param_value("title") : "";
           const std::string id =
               req.has_param("id") ? req.get_param_value("id") : "";
           const std::string material_id =
               service_.IngestGlyphs(document, title, id);
           const LearningMaterial material = service_.Material(material_id);
           Reply(res, 201,
                 {{"id", material_id}, {"num_slides", material.num_slides()}});
         }));

  s.Post(
      R"(/materials/([^/]+)/drafts)", Guard([this](const auto& req, auto& res) {
        const std::string mode =
            req.has_param("mode") ? req.get_param_value("mode") : "bottom-up";
        const std::string id =
            service_.CreateDraft(req.matches[1], ParsePipelineMode(mode));
        Reply(res, 202, DraftJson(service_.GetDraft(id)));
      }));

  s.Get(R"(/drafts/([^/]+))", Guard([this](const auto& req, auto& res) {
          Reply(res, 200, DraftJson(service_.GetDraft(req.matches[1])));
        }));

  s.Get(R"(/drafts/([^/]+)/concepts)",
        Guard([this](const auto& req, auto& res) {
          const std::string id = req.matches[1];
          const std::vector<Concept> concepts = service_.ListConcepts(id);
          json list = json::array();
          for (const Concept& c : concepts) list.push_back(ConceptJson(c));
          Reply(res, 200,
                {{"draft_id", id},
                 {"version", service_.GetDraft(id).version},
                 {"concepts", std::move(list)}});
        }));

  s.Delete(R"(/drafts/([^/]+)/concepts/(.+))",
           Guard([this](const auto& req, auto& res) {
             const uint64_t version =
                 service_.RemoveConcept(req.matches[1], req.matches[2],
                                        ExpectedVersion(req, ParseBody(req)));
             Reply(res, 200, {{"version", version}});
           }));

  s.Post(
      R"(/drafts/([^/]+)/concepts)", Guard([this](const auto& req, auto& res) {
        const json body = ParseBody(req);
        if (!body.contains("query") || !body["query"].is_string()) {
          throw Error(ErrorCode::kInvalidArgument, "query is required");
        }
        const std::vector<int> slides =
            body.value("slides", std::vector<int>{});
        const uint64_t version = service_.AddConcept(
            req.matches[1], body["query"], slides, ExpectedVersion(req, body));
        Reply(res, 200, {{"version", version}});
      }));

  s.Post(R"(/drafts/([^/]+)/finalize)",
         Guard([this](const auto& req, auto& res) {
           const std::string id = req.matches[1];
           const auto graph =
               service_.Finalize(id, ExpectedVersion(req, ParseBody(req)));
           const DraftView view = service_.GetDraft(id);
           Reply(res, 200,
                 {{"draft_id", id},
                  {"material_id", view.material_id},
                  {"version", view.version},
                  {"state", DraftStateName(view.state)},
                  {"nodes", graph->node_count()},
                  {"edges", graph->edge_count()},
                  {"graph", "/materials/" + view.material_id + "/edukg"}});
         }));

  s.Get(R"(/materials/([^/]+)/edukg)",
        Guard([this](const auto& req, auto& res) {
          const auto graph = service_.store().Published(req.matches[1]);
          res.status = 200;
          res.set_content(SerializeGraph(*graph), kJson);
        }));

  s.Get(R"(/materials/([^/]+)/slides/(-?\d+)/edukg)",
        Guard([this](const auto& req, auto& res) {
          const std::string material_id = req.matches[1];
          const int page = std::stoi(req.matches[2]);
          const int k = IntParam(req, "k", 5);
          if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
          const std::vector<Concept> concepts = service_.store().SlideEduKG(
              material_id, page, k, GraphStore::Slot::kPublished);
          json list = json::array();
          for (const Concept& c : concepts) {
            list.push_back({{"uri", c.uri},
                            {"label", c.label},
                            {"w_lm", c.w_lm},
                            {"w_slide", c.slide_weights.at(page)},
                            {"importance", c.importance_per_slide.at(page)}});
          }
          Reply(res, 200,
                {{"material_id", material_id},
                 {"slide", page},
                 {"k", k},
                 {"concepts", std::move(list)}});
        }));
}

}  // namespace edukg
