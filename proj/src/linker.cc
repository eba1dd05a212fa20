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

#include "edukg/linker.h"

#include <charconv>
#include <cstdio>
#include <set>

#include "edukg/error.h"
#include "json.hpp"

namespace edukg {
namespace {

using nlohmann::json;

// Spotlight encodes every attribute as a string; accept plain numbers too.
double NumberField(const json& object, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw Error(ErrorCode::kMalformedResponse,
                std::string("annotation resource lacks ") + key);
  }
  if (it->is_number()) return it->get<double>();
  if (it->is_string()) {
    const std::string& s = it->get_ref<const std::string&>();
    try {
      size_t used = 0;
      double value = std::stod(s, &used);
      if (used == s.size()) return value;
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorCode::kMalformedResponse,
              std::string("annotation field ") + key + " is not numeric");
}

std::vector<Concept> ShellsFromHits(const std::vector<AnnotationHit>& hits,
                                    std::set<std::string>& seen) {
  std::vector<Concept> out;
  for (const AnnotationHit& hit : hits) {
    if (!seen.insert(hit.uri).second) continue;
    Concept c;
    c.uri = hit.uri;
    c.label = LabelFromUri(hit.uri);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::string FormatConfidence(double confidence) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", confidence);
  return buffer;
}

std::vector<AnnotationHit> ParseAnnotationResponse(std::string_view body) {
  json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kMalformedResponse,
                "annotation response is not a JSON object");
  }
  std::vector<AnnotationHit> hits;
  auto resources = doc.find("Resources");
  if (resources == doc.end() || resources->is_null()) return hits;
  if (resources->is_object()) {
    // Single-resource answers are sometimes not wrapped in an array.
    *resources = json::array({*resources});
  }
  if (!resources->is_array()) {
    throw Error(ErrorCode::kMalformedResponse, "Resources is not a list");
  }
  for (const json& resource : *resources) {
    if (!resource.is_object() || !resource.contains("@URI") ||
        !resource["@URI"].is_string()) {
      throw Error(ErrorCode::kMalformedResponse, "resource without @URI");
    }
    AnnotationHit hit;
    hit.uri = resource["@URI"].get<std::string>();
    hit.surface_form = resource.value("@surfaceForm", "");
    hit.similarity_score = NumberField(resource, "@similarityScore");
    hit.offset = static_cast<int>(NumberField(resource, "@offset"));
    hit.support = resource.contains("@support")
                      ? static_cast<int>(NumberField(resource, "@support"))
                      : 0;
    hits.push_back(std::move(hit));
  }
  return hits;
}

std::vector<Concept> EntityLinker::LinkKeyphrases(
    std::span<const Keyphrase> keyphrases, const PipelineConfig& config,
    RunLog* log) {
  std::string text;
  for (const Keyphrase& k : keyphrases) {
    if (!text.empty()) text += '\n';
    text += k.surface;
  }
  if (Trim(text).empty()) return {};
  std::set<std::string> seen;
  try {
    return ShellsFromHits(
        Annotate(text, config.linker_confidence, config.linker_support), seen);
  } catch (const Error& e) {
    if (log != nullptr) log->Warn(std::string("linking skipped: ") + e.what());
    return {};
  }
}

SpotlightClient::SpotlightClient(Transport& transport, SpotlightOptions options)
    : transport_(transport),
      options_(std::move(options)),
      limiter_(options_.max_in_flight) {}

HttpRequest SpotlightClient::BuildRequest(const std::string& endpoint,
                                          std::string_view text,
                                          double confidence, int support) {
  HttpRequest request;
  request.method = "POST";
  request.url = endpoint;
  request.content_type = "application/x-www-form-urlencoded";
  request.accept = "application/json";
  request.body = FormEncode({{"text", std::string(text)},
                             {"confidence", FormatConfidence(confidence)},
                             {"support", std::to_string(support)}});
  return request;
}

std::vector<AnnotationHit> SpotlightClient::Annotate(std::string_view text,
                                                     double confidence,
                                                     int support) {
  if (Trim(text).empty()) {
    throw Error(ErrorCode::kEmptyText, "cannot annotate empty text");
  }
  const HttpRequest request =
      BuildRequest(options_.endpoint, text, confidence, support);
  HttpResponse response;
  {
    InFlightLimiter::Slot slot(limiter_);
    response = SendWithRetry(transport_, request, options_.retry);
  }
  if (response.status != 200) {
    throw Error(
        ErrorCode::kMalformedResponse,
        "annotation service returned HTTP " + std::to_string(response.status));
  }
  std::vector<AnnotationHit> hits = ParseAnnotationResponse(response.body);
  std::erase_if(hits, [&](const AnnotationHit& hit) {
    return hit.similarity_score < confidence ||
           (hit.support > 0 && hit.support < support);
  });
  return hits;
}

std::vector<Concept> SpotlightClient::LinkKeyphrases(
    std::span<const Keyphrase> keyphrases, const PipelineConfig& config,
    RunLog* log) {
  std::vector<Concept> concepts;
  std::set<std::string> seen;
  const size_t batch = std::max<size_t>(1, options_.batch_size);
  for (size_t start = 0; start < keyphrases.size(); start += batch) {
    const size_t end = std::min(keyphrases.size(), start + batch);
    std::string text;
    for (size_t i = start; i < end; ++i) {
      if (Trim(keyphrases[i].surface).empty()) continue;
      if (!text.empty()) text += '\n';
      text += keyphrases[i].surface;
    }
    if (text.empty()) continue;
    try {
      auto hits =
          Annotate(text, config.linker_confidence, config.linker_support);
      for (Concept& c : ShellsFromHits(hits, seen)) {
        concepts.push_back(std::move(c));
      }
    } catch (const Error& e) {
      if (log != nullptr) {
        log->Warn("linking batch " + std::to_string(start / batch) +
                  " skipped: " + e.what());
      }
    }
  }
  return concepts;
}

}  // namespace edukg
