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

#include "edukg/knowledge_base.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>
#include <tuple>
#include <utility>

#include "edukg/core_model.h"
#include "edukg/error.h"
#include "edukg/expansion.h"
#include "edukg/weighting.h"
#include "json.hpp"

namespace edukg {
namespace {

using nlohmann::json;

bool EndsWith(std::string_view text, std::string_view suffix) {
  return text.size() >= suffix.size() &&
         text.substr(text.size() - suffix.size()) == suffix;
}

bool IsWordByte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || u >= 0x80;
}

std::string_view PathOf(std::string_view url) {
  const size_t query = url.find('?');
  return query == std::string_view::npos ? url : url.substr(0, query);
}

std::string QueryParam(std::string_view url, std::string_view name) {
  const size_t query = url.find('?');
  if (query == std::string_view::npos) return "";
  for (const auto& [key, value] : ParseForm(url.substr(query + 1))) {
    if (key == name) return value;
  }
  return "";
}

std::string NumberString(double value) { return json(value).dump(); }

HttpResponse Ok(std::string body) { return HttpResponse{200, std::move(body)}; }

}  // namespace

SimulatedKnowledgeBase::SimulatedKnowledgeBase(std::vector<KbEntity> entities)
    : entities_(std::move(entities)) {
  for (size_t i = 0; i < entities_.size(); ++i) {
    if (entities_[i].label.empty()) {
      entities_[i].label = LabelFromUri(entities_[i].uri);
    }
    by_uri_.emplace(entities_[i].uri, i);
  }
}

SimulatedKnowledgeBase SimulatedKnowledgeBase::FromJson(
    std::string_view content) {
  json doc = json::parse(content, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.contains("entities") ||
      !doc["entities"].is_array()) {
    throw Error(ErrorCode::kInvalidArgument,
                "knowledge base file needs an 'entities' array");
  }
  std::vector<KbEntity> entities;
  for (const json& e : doc["entities"]) {
    KbEntity entity;
    entity.uri = e.at("uri").get<std::string>();
    entity.label = e.value("label", "");
    entity.aliases = e.value("aliases", std::vector<std::string>{});
    entity.abstract = e.value("abstract", "");
    entity.support = e.value("support", 100);
    entity.similarity = e.value("similarity", 1.0);
    entity.related = e.value("related", std::vector<std::string>{});
    entity.categories = e.value("categories", std::vector<std::string>{});
    entity.spot = e.value("spot", true);
    entities.push_back(std::move(entity));
  }
  return SimulatedKnowledgeBase(std::move(entities));
}

SimulatedKnowledgeBase SimulatedKnowledgeBase::FromFile(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open knowledge base " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str());
}

const KbEntity* SimulatedKnowledgeBase::FindByUri(std::string_view uri) const {
  auto it = by_uri_.find(uri);
  return it == by_uri_.end() ? nullptr : &entities_[it->second];
}

std::string SimulatedKnowledgeBase::Annotate(std::string_view text,
                                             double confidence,
                                             int support) const {
  const std::string folded = CaseFold(text);
  // (offset, -length, entity index) so the longest name wins at an offset.
  std::vector<std::tuple<size_t, long, size_t>> matches;
  for (size_t i = 0; i < entities_.size(); ++i) {
    const KbEntity& entity = entities_[i];
    if (!entity.spot || entity.similarity < confidence ||
        entity.support < support) {
      continue;
    }
    std::vector<std::string> names = entity.aliases;
    names.push_back(entity.label);
    for (const std::string& name : names) {
      const std::string needle = CaseFold(name);
      if (needle.empty()) continue;
      for (size_t at = folded.find(needle); at != std::string::npos;
           at = folded.find(needle, at + 1)) {
        const size_t end = at + needle.size();
        if (at > 0 && IsWordByte(folded[at - 1])) continue;
        if (end < folded.size() && IsWordByte(folded[end])) continue;
        matches.emplace_back(at, -static_cast<long>(needle.size()), i);
      }
    }
  }
  std::sort(matches.begin(), matches.end());
  json resources = json::array();
  size_t covered_until = 0;
  for (const auto& [offset, neg_length, index] : matches) {
    if (offset < covered_until) continue;
    const size_t length = static_cast<size_t>(-neg_length);
    covered_until = offset + length;
    const KbEntity& entity = entities_[index];
    resources.push_back(
        {{"@URI", entity.uri},
         {"@support", std::to_string(entity.support)},
         {"@types", ""},
         {"@surfaceForm", std::string(text.substr(offset, length))},
         {"@offset", std::to_string(offset)},
         {"@similarityScore", NumberString(entity.similarity)},
         {"@percentageOfSecondRank", "0.0"}});
  }
  json doc = {{"@text", std::string(text)},
              {"@confidence", NumberString(confidence)},
              {"@support", std::to_string(support)},
              {"@types", ""},
              {"@sparql", ""},
              {"@policy", "whitelist"}};
  if (!resources.empty()) doc["Resources"] = std::move(resources);
  return doc.dump();
}

std::string SimulatedKnowledgeBase::Sparql(std::string_view query) const {
  static const std::regex kTriple(
      R"(<([^>]+)>\s+<([^>]+)>\s+\?(\w+)\s*\}(?:\s*LIMIT\s+(\d+))?)");
  std::cmatch m;
  if (!std::regex_search(query.data(), query.data() + query.size(), m,
                         kTriple)) {
    throw Error(ErrorCode::kInvalidArgument, "unsupported SPARQL query");
  }
  const std::string subject = m[1].str();
  const std::string predicate = m[2].str();
  const std::string variable = m[3].str();
  const long limit = m[4].matched ? std::stol(m[4].str()) : -1;
  std::vector<std::string> objects;
  if (const KbEntity* entity = FindByUri(subject)) {
    if (predicate == kWikiPageLinkPredicate) {
      objects = entity->related;
    } else if (predicate == kSubjectPredicate) {
      objects = entity->categories;
    }
  }
  if (limit >= 0 && objects.size() > static_cast<size_t>(limit)) {
    objects.resize(static_cast<size_t>(limit));
  }
  json bindings = json::array();
  for (const std::string& object : objects) {
    bindings.push_back({{variable, {{"type", "uri"}, {"value", object}}}});
  }
  json doc = {{"head", {{"link", json::array()}, {"vars", {variable}}}},
              {"results",
               {{"distinct", false},
                {"ordered", true},
                {"bindings", std::move(bindings)}}}};
  return doc.dump();
}

std::string SimulatedKnowledgeBase::Article(std::string_view title) const {
  json pages = json::object();
  const KbEntity* found = nullptr;
  for (size_t i = 0; i < entities_.size(); ++i) {
    if (ArticleTitleFromUri(entities_[i].uri) == title) {
      found = &entities_[i];
      pages[std::to_string(1000 + i)] = {{"pageid", 1000 + i},
                                         {"ns", 0},
                                         {"title", LabelFromUri(found->uri)},
                                         {"extract", found->abstract}};
      break;
    }
  }
  if (found == nullptr) {
    pages["-1"] = {{"ns", 0}, {"title", std::string(title)}, {"missing", ""}};
  }
  json doc = {{"batchcomplete", ""}, {"query", {{"pages", std::move(pages)}}}};
  return doc.dump();
}

HttpResponse SimulatedKnowledgeBase::Send(const HttpRequest& request) {
  const std::string_view path = PathOf(request.url);
  try {
    if (EndsWith(path, "/annotate")) {
      ++annotate_calls_;
      std::string text;
      double confidence = 0.0;
      int support = 0;
      for (const auto& [key, value] : ParseForm(request.body)) {
        if (key == "text") text = value;
        if (key == "confidence") confidence = std::stod(value);
        if (key == "support") support = std::stoi(value);
      }
      return Ok(Annotate(text, confidence, support));
    }
    if (EndsWith(path, "/sparql")) {
      ++sparql_calls_;
      return Ok(Sparql(QueryParam(request.url, "query")));
    }
    if (EndsWith(path, "/api.php")) {
      ++article_calls_;
      return Ok(Article(QueryParam(request.url, "titles")));
    }
  } catch (const std::exception& e) {
    return HttpResponse{400, e.what()};
  }
  return HttpResponse{404, "no route for " + std::string(path)};
}

}  // namespace edukg
