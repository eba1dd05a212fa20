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

#include "edukg/weighting.h"

#include "edukg/error.h"
#include "json.hpp"

namespace edukg {

double TextSimilarity(std::string_view a, std::string_view b,
                      EmbeddingProvider& embedder) {
  const std::string texts[] = {std::string(a), std::string(b)};
  const auto vectors = EmbedTexts(embedder, texts);
  return Cosine(vectors[0], vectors[1]);
}

double WeightConceptLm(const Concept& entity, const LearningMaterial& material,
                       EmbeddingProvider& embedder) {
  return TextSimilarity(entity.abstract, material.full_text, embedder);
}

double WeightConceptSlide(const Concept& entity, const Slide& slide,
                          EmbeddingProvider& embedder) {
  return TextSimilarity(entity.abstract, slide.text, embedder);
}

double WeightCategory(std::string_view category_name,
                      const LearningMaterial& material,
                      EmbeddingProvider& embedder) {
  if (Trim(category_name).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "category name is empty");
  }
  return TextSimilarity(category_name, material.full_text, embedder);
}

std::string ArticleTitleFromUri(std::string_view uri) {
  const size_t cut = uri.find_last_of('/');
  std::string_view tail =
      cut == std::string_view::npos ? uri : uri.substr(cut + 1);
  return UrlDecode(tail);
}

WikipediaAbstractSource::WikipediaAbstractSource(Transport& transport,
                                                 WikipediaOptions options,
                                                 PersistentCache* cache)
    : transport_(transport),
      options_(std::move(options)),
      cache_(cache != nullptr ? cache : &own_cache_),
      limiter_(options_.max_in_flight) {}

HttpRequest WikipediaAbstractSource::BuildRequest(const std::string& endpoint,
                                                  std::string_view title) {
  HttpRequest request;
  request.method = "GET";
  request.accept = "application/json";
  request.url = endpoint +
                "?action=query&format=json&prop=extracts&exintro=1"
                "&explaintext=1&redirects=1&titles=" +
                UrlEncode(title);
  return request;
}

std::string WikipediaAbstractSource::ParseExtract(std::string_view body) {
  using nlohmann::json;
  json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kMalformedResponse, "article API: invalid JSON");
  }
  auto query = doc.find("query");
  if (query == doc.end() || !query->contains("pages")) {
    throw Error(ErrorCode::kMalformedResponse, "article API: no pages");
  }
  for (const auto& [page_id, page] : (*query)["pages"].items()) {
    if (page.contains("missing") || page.contains("invalid")) continue;
    if (page.contains("extract") && page["extract"].is_string()) {
      return page["extract"].get<std::string>();
    }
  }
  return "";
}

std::string WikipediaAbstractSource::FetchAbstract(const std::string& uri) {
  if (auto cached = cache_->Get(uri)) return *cached;
  const std::string title = ArticleTitleFromUri(uri);
  if (title.empty()) return "";
  HttpResponse response;
  {
    InFlightLimiter::Slot slot(limiter_);
    ++network_calls_;
    response = SendWithRetry(transport_, BuildRequest(options_.endpoint, title),
                             options_.retry);
  }
  std::string extract;
  if (response.status == 200) {
    extract = ParseExtract(response.body);
  } else if (response.status != 404) {
    throw Error(ErrorCode::kMalformedResponse,
                "article API returned HTTP " + std::to_string(response.status));
  }
  cache_->Put(uri, extract);
  return extract;
}

}  // namespace edukg
