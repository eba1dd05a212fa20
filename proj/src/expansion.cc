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

#include "edukg/expansion.h"

#include <algorithm>
#include <future>
#include <set>

#include "edukg/error.h"
#include "json.hpp"

namespace edukg {
namespace {

using nlohmann::json;

std::string CategoryName(std::string_view uri) {
  std::string label = LabelFromUri(uri);
  constexpr std::string_view kPrefix = "Category:";
  if (label.starts_with(kPrefix)) label.erase(0, kPrefix.size());
  return label;
}

struct WeightedUri {
  std::string uri;
  double weight = 0.0;
};

struct ConceptExpansion {
  std::string source_uri;
  std::vector<WeightedUri> related;
  std::vector<WeightedUri> categories;
  bool failed = false;
  std::string error;
};

ConceptExpansion ExpandOne(const std::string& uri,
                           const std::string& material_text,
                           const PipelineConfig& config,
                           ExpansionServices services) {
  ConceptExpansion result;
  result.source_uri = uri;
  try {
    for (const std::string& related : services.linked_data.FetchRelated(
             uri, config.related_cap_per_concept)) {
      if (related == uri) continue;
      std::string abstract;
      try {
        abstract = services.abstracts.FetchAbstract(related);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kServiceUnavailable &&
            e.code() != ErrorCode::kMalformedResponse) {
          throw;
        }
      }
      result.related.push_back(WeightedUri{
          related, TextSimilarity(abstract, material_text, services.embedder)});
    }
    for (const std::string& category :
         services.linked_data.FetchCategories(uri)) {
      const std::string name = CategoryName(category);
      if (Trim(name).empty()) continue;
      result.categories.push_back(WeightedUri{
          category, TextSimilarity(name, material_text, services.embedder)});
    }
  } catch (const Error& e) {
    result.failed = true;
    result.error = e.what();
  }
  return result;
}

}  // namespace

std::string RelatedQuery(std::string_view uri, int cap) {
  return "SELECT ?o WHERE { <" + std::string(uri) + "> <" +
         kWikiPageLinkPredicate + "> ?o } LIMIT " + std::to_string(cap);
}

std::string CategoryQuery(std::string_view uri) {
  return "SELECT ?c WHERE { <" + std::string(uri) + "> <" + kSubjectPredicate +
         "> ?c }";
}

std::vector<std::string> ParseSparqlBindings(std::string_view body,
                                             std::string_view variable) {
  json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("results") ||
      !doc["results"].contains("bindings") ||
      !doc["results"]["bindings"].is_array()) {
    throw Error(ErrorCode::kMalformedResponse,
                "SPARQL response lacks results.bindings");
  }
  std::vector<std::string> values;
  const std::string key(variable);
  for (const json& binding : doc["results"]["bindings"]) {
    if (!binding.is_object() || !binding.contains(key)) continue;
    const json& term = binding[key];
    if (!term.contains("value") || !term["value"].is_string()) {
      throw Error(ErrorCode::kMalformedResponse, "binding without value");
    }
    values.push_back(term["value"].get<std::string>());
  }
  return values;
}

LinkedDataClient::LinkedDataClient(Transport& transport, SparqlOptions options,
                                   PersistentCache* cache)
    : transport_(transport),
      options_(std::move(options)),
      cache_(cache != nullptr ? cache : &own_cache_),
      limiter_(options_.max_in_flight) {}

HttpRequest LinkedDataClient::BuildRequest(const std::string& endpoint,
                                           const std::string& query) {
  HttpRequest request;
  request.method = "GET";
  request.accept = "application/sparql-results+json";
  request.url = endpoint + "?query=" + UrlEncode(query) +
                "&format=" + UrlEncode("application/sparql-results+json");
  return request;
}

std::vector<std::string> LinkedDataClient::RunQuery(const std::string& query,
                                                    std::string_view variable) {
  if (auto cached = cache_->Get(query)) {
    return json::parse(*cached).get<std::vector<std::string>>();
  }
  HttpResponse response;
  {
    InFlightLimiter::Slot slot(limiter_);
    ++network_calls_;
    response = SendWithRetry(transport_, BuildRequest(options_.endpoint, query),
                             options_.retry);
  }
  if (response.status != 200) {
    throw Error(
        ErrorCode::kMalformedResponse,
        "SPARQL endpoint returned HTTP " + std::to_string(response.status));
  }
  std::vector<std::string> values =
      ParseSparqlBindings(response.body, variable);
  cache_->Put(query, json(values).dump());
  return values;
}

std::vector<std::string> LinkedDataClient::FetchRelated(const std::string& uri,
                                                        int cap) {
  if (cap < 1) {
    throw Error(ErrorCode::kInvalidArgument, "related cap must be >= 1");
  }
  std::vector<std::string> values = RunQuery(RelatedQuery(uri, cap), "o");
  if (values.size() > static_cast<size_t>(cap)) values.resize(cap);
  return values;
}

std::vector<std::string> LinkedDataClient::FetchCategories(
    const std::string& uri) {
  return RunQuery(CategoryQuery(uri), "c");
}

EduKG ExpandGraph(const EduKG& graph, const LearningMaterial& material,
                  const PipelineConfig& config, ExpansionServices services,
                  RunLog* log, ExpansionStats* stats) {
  std::vector<std::string> main_concepts;
  for (const auto& [id, node] : graph.nodes()) {
    if (node.kind == NodeKind::kConcept) main_concepts.push_back(id);
  }
  ExpansionStats local;
  local.main_concepts = static_cast<int>(main_concepts.size());

  // Fetch and weigh concurrently in bounded waves, apply in uri order.
  std::vector<ConceptExpansion> results;
  results.reserve(main_concepts.size());
  const size_t wave = static_cast<size_t>(std::max(1, services.max_parallel));
  for (size_t start = 0; start < main_concepts.size(); start += wave) {
    std::vector<std::future<ConceptExpansion>> tasks;
    const size_t end = std::min(main_concepts.size(), start + wave);
    for (size_t i = start; i < end; ++i) {
      tasks.push_back(std::async(
          std::launch::async, ExpandOne, std::cref(main_concepts[i]),
          std::cref(material.full_text), std::cref(config), services));
    }
    for (auto& task : tasks) results.push_back(task.get());
  }

  EduKG expanded = graph;
  for (const ConceptExpansion& result : results) {
    if (result.failed) {
      ++local.failures;
      if (log != nullptr) {
        log->Warn("expansion of " + result.source_uri +
                  " skipped: " + result.error);
      }
      continue;
    }
    for (const WeightedUri& related : result.related) {
      if (related.weight < config.related_weight_floor) {
        ++local.related_pruned;
        continue;
      }
      if (expanded.AddNode(Node{related.uri,
                                NodeKind::kRelatedConcept,
                                LabelFromUri(related.uri),
                                {{"uri", related.uri}}})) {
        ++local.related_added;
      }
      expanded.AddEdge(Edge{result.source_uri, related.uri,
                            EdgeKind::kRelatedTo, related.weight});
    }
    for (const WeightedUri& category : result.categories) {
      if (category.weight < config.category_weight_floor) {
        ++local.categories_pruned;
        continue;
      }
      const Node* existing = expanded.FindNode(category.uri);
      if (existing != nullptr && existing->kind != NodeKind::kCategory) {
        continue;
      }
      if (expanded.AddNode(Node{category.uri,
                                NodeKind::kCategory,
                                CategoryName(category.uri),
                                {{"uri", category.uri}}})) {
        ++local.categories_added;
      }
      expanded.AddEdge(Edge{result.source_uri, category.uri,
                            EdgeKind::kBelongsTo, category.weight});
    }
  }
  if (stats != nullptr) *stats = local;
  return expanded;
}

}  // namespace edukg
